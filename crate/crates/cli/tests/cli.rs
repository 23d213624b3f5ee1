use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const F7: &str = "0 1\n0 2\n1 2\n2 3\n3 4\n4 5\n4 6\n5 6\n";
const F7_LABELS: &str = "0\tM\n1\tM\n2\tM\n3\tBOTH\n4\tORMS\n5\tORMS\n6\tORMS\n";

fn citenet(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_citenet"))
        .args(args)
        .current_dir(dir)
        .env_remove("CITENET_THREADS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn workspace() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("f7.txt"), F7).unwrap();
    fs::write(dir.path().join("labels.tsv"), F7_LABELS).unwrap();
    dir
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap()
}

/// Exit code and the single `error:` line of a failed run.
fn failure(o: &Output) -> (i32, String) {
    let err = stderr(o);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with("error: "), "{err}");
    (o.status.code().unwrap(), err.trim_end().to_string())
}

#[test]
fn stats_prints_summary_and_histogram() {
    let dir = workspace();
    let out = citenet(dir.path(), &["stats", "f7.txt", "--top", "2"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "nodes=7 edges=8\nmin=2 max=3 mean=2.29 median=2\nhub node=2 degree=3\nhub node=4 degree=3\n"
    );
    assert_eq!(read(dir.path(), "degree_histogram.csv"), "degree,count\n2,5\n3,2\n");
}

#[test]
fn empty_inputs_are_rejected() {
    let dir = workspace();
    fs::write(dir.path().join("empty.txt"), "").unwrap();
    fs::write(dir.path().join("comments.txt"), "# nothing\n\n# here\n").unwrap();
    for file in ["empty.txt", "comments.txt"] {
        let (code, err) = failure(&citenet(dir.path(), &["stats", file]));
        assert_eq!(code, 2);
        assert_eq!(err, format!("error: {file}: empty input"));
    }
    let (code, err) = failure(&citenet(dir.path(), &["stats", "missing.txt"]));
    assert_eq!(code, 2);
    assert!(err.starts_with("error: missing.txt:"));
}

#[test]
fn malformed_line_is_an_input_error() {
    let dir = workspace();
    fs::write(dir.path().join("bad.txt"), "0 1\n1 x\n").unwrap();
    let (code, err) = failure(&citenet(dir.path(), &["stats", "bad.txt"]));
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn clean_single_pass_on_a_path() {
    let dir = workspace();
    fs::write(dir.path().join("path.txt"), "0 1\n1 2\n2 3\n").unwrap();
    let out = citenet(dir.path(), &["clean", "path.txt", "--prune-degree", "1", "--out", "c/out.txt"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out), "before n=4 m=3\nafter n=2 m=1\n");
    assert_eq!(read(dir.path(), "c/out.txt"), "0 1\n");
    assert_eq!(read(dir.path(), "c/mapping.tsv"), "0\t1\n1\t2\n");
    let manifest = read(dir.path(), "c/out.txt.manifest");
    assert!(manifest.contains("param.prune_degree=1\n"));
    assert!(manifest.contains("output=c/out.txt\noutput=c/mapping.tsv\n"));
}

#[test]
fn clean_leaves_f7_alone() {
    let dir = workspace();
    let out = citenet(dir.path(), &["clean", "f7.txt", "--keep-lcc", "--prune-degree", "1", "--out", "o.txt"]);
    assert!(out.status.success());
    assert_eq!(read(dir.path(), "o.txt"), F7);
    assert_eq!(read(dir.path(), "mapping.tsv"), "0\t0\n1\t1\n2\t2\n3\t3\n4\t4\n5\t5\n6\t6\n");
}

#[test]
fn clean_drops_the_smaller_component() {
    let dir = workspace();
    fs::write(dir.path().join("two.txt"), "5 6\n0 1\n1 2\n2 0\n").unwrap();
    let out = citenet(dir.path(), &["clean", "two.txt", "--keep-lcc", "--out", "o.txt", "--mapping", "m.tsv"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "before n=7 m=4\nafter n=3 m=3\n");
    assert_eq!(read(dir.path(), "m.tsv"), "0\t0\n1\t1\n2\t2\n");

    fs::write(dir.path().join("shifted.txt"), "0 1\n3 4\n4 5\n5 3\n").unwrap();
    citenet(dir.path(), &["clean", "shifted.txt", "--keep-lcc", "--out", "s.txt", "--mapping", "s.tsv"]);
    assert_eq!(read(dir.path(), "s.txt"), "0 1\n0 2\n1 2\n");
    assert_eq!(read(dir.path(), "s.tsv"), "0\t3\n1\t4\n2\t5\n");
}

#[test]
fn clean_refuses_to_prune_everything() {
    let dir = workspace();
    fs::write(dir.path().join("path.txt"), "0 1\n1 2\n2 3\n").unwrap();
    let (code, err) = failure(&citenet(
        dir.path(),
        &["clean", "path.txt", "--prune-degree", "1", "--iterative", "--out", "o.txt"],
    ));
    assert_eq!(code, 2);
    assert_eq!(err, "error: all 4 nodes pruned at degree threshold 1");
}

#[test]
fn iterative_needs_a_threshold() {
    let dir = workspace();
    let (code, _) = failure(&citenet(dir.path(), &["clean", "f7.txt", "--iterative", "--out", "o.txt"]));
    assert_eq!(code, 1);
}

#[test]
fn cluster_f7_with_leiden() {
    let dir = workspace();
    let out = citenet(
        dir.path(),
        &["cluster", "f7.txt", "--algo", "leiden", "--resolution", "1.0", "--seed", "42", "--out", "p.tsv"],
    );
    assert!(out.status.success());
    assert_eq!(stdout(&out), "algo=leiden seed=42 resolution=1 clusters=2 quality=0.3671875\n");
    let partition = read(dir.path(), "p.tsv");
    let ids: Vec<&str> = partition.lines().map(|l| l.split('\t').nth(1).unwrap()).collect();
    assert_eq!(&ids[..3], &[ids[0]; 3]);
    assert_eq!(&ids[4..], &[ids[4]; 3]);
    assert_ne!(ids[0], ids[4]);
    let manifest = read(dir.path(), "p.tsv.manifest");
    for line in ["command=cluster", "param.algo=leiden", "param.resolution=1", "param.seed=42", "output=p.tsv", "result.quality=0.3671875"] {
        assert!(manifest.lines().any(|l| l == line), "missing {line} in\n{manifest}");
    }
    assert!(manifest.lines().any(|l| l.starts_with("result.levels=")));
}

#[test]
fn low_resolution_keeps_f7_whole() {
    let dir = workspace();
    for gamma in ["0.05", "paper"] {
        let out = citenet(dir.path(), &["cluster", "f7.txt", "--resolution", gamma, "--out", "p.tsv"]);
        assert!(out.status.success());
        assert_eq!(stdout(&out), "algo=leiden seed=0 resolution=0.05 clusters=1 quality=0.95\n");
        assert!(read(dir.path(), "p.tsv").lines().all(|l| l.ends_with("\t0")));
    }
}

#[test]
fn louvain_and_spectral_split_f7() {
    let dir = workspace();
    let out = citenet(dir.path(), &["cluster", "f7.txt", "--algo", "louvain", "--out", "l.tsv"]);
    assert!(stdout(&out).contains("clusters=2 quality=0.3671875"));
    let out = citenet(dir.path(), &["cluster", "f7.txt", "--algo", "spectral", "--k", "2", "--out", "s.tsv"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(read(dir.path(), "s.tsv.manifest").contains("param.k=2\n"));
}

#[test]
fn cluster_usage_errors() {
    let dir = workspace();
    let cases: [&[&str]; 5] = [
        &["cluster", "f7.txt", "--algo", "spectral", "--out", "p.tsv"],
        &["cluster", "f7.txt", "--algo", "kmeans", "--out", "p.tsv"],
        &["cluster", "f7.txt", "--k", "2", "--out", "p.tsv"],
        &["cluster", "f7.txt", "--resolution", "-1", "--out", "p.tsv"],
        &["cluster", "f7.txt"],
    ];
    for args in cases {
        let (code, _) = failure(&citenet(dir.path(), args));
        assert_eq!(code, 1, "{args:?}");
    }
    assert!(!dir.path().join("p.tsv").exists());
}

#[test]
fn spectral_over_cap_is_refused() {
    let dir = workspace();
    let (code, err) = failure(&citenet(
        dir.path(),
        &["cluster", "f7.txt", "--algo", "spectral", "--k", "2", "--spectral-cap", "6", "--out", "p.tsv"],
    ));
    assert_eq!(code, 3);
    assert_eq!(err, "error: spectral clustering refused: graph has 7 nodes, size cap is 6");
}

#[test]
fn eval_writes_five_reports_with_labels() {
    let dir = workspace();
    fs::write(dir.path().join("p.tsv"), "0\t0\n1\t0\n2\t0\n3\t1\n4\t1\n5\t1\n6\t1\n").unwrap();
    let out = citenet(
        dir.path(),
        &["eval", "f7.txt", "--partition", "p.tsv", "--labels", "labels.tsv", "--report-dir", "rep"],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).starts_with("clusters=2 intra=7 inter=1 intra_percent=87.50% quality=0.3671875\n"));
    let mut names: Vec<String> = fs::read_dir(dir.path().join("rep"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["fragmentation.csv", "link_matrix.csv", "purity.csv", "sizes.csv", "summary.txt"]);
    let purity = read(dir.path(), "rep/purity.csv");
    assert!(purity.lines().any(|l| l == "1,4,ORMS,0.75"), "{purity}");
    assert_eq!(read(dir.path(), "rep/sizes.csv"), "cluster_id,size\n1,4\n0,3\n");
}

#[test]
fn eval_without_labels_writes_three_reports() {
    let dir = workspace();
    fs::write(dir.path().join("p.tsv"), "0\t0\n1\t0\n2\t0\n3\t1\n4\t1\n5\t1\n6\t1\n").unwrap();
    let out = citenet(dir.path(), &["eval", "f7.txt", "--partition", "p.tsv", "--report-dir", "rep"]);
    assert!(out.status.success());
    assert_eq!(fs::read_dir(dir.path().join("rep")).unwrap().count(), 3);
    assert_eq!(read(dir.path(), "rep/link_matrix.csv"), "3,1\n1,4\n");
}

#[test]
fn eval_names_the_missing_node() {
    let dir = workspace();
    fs::write(dir.path().join("p.tsv"), "0\t0\n1\t0\n2\t0\n3\t1\n4\t1\n5\t1\n").unwrap();
    let (code, err) = failure(&citenet(dir.path(), &["eval", "f7.txt", "--partition", "p.tsv", "--report-dir", "rep"]));
    assert_eq!(code, 2);
    assert!(err.contains("node 6"), "{err}");
    fs::write(dir.path().join("q.tsv"), "0\t0\n1\t0\n2\t0\n3\t1\n4\t1\n5\t1\n6\t1\n9\t1\n").unwrap();
    let (code, err) = failure(&citenet(dir.path(), &["eval", "f7.txt", "--partition", "q.tsv", "--report-dir", "rep"]));
    assert_eq!(code, 2);
    assert!(err.contains('9'), "{err}");
}

#[test]
fn neighborhood_of_f7() {
    let dir = workspace();
    let out = citenet(dir.path(), &["neighborhood", "f7.txt", "--node", "0", "--depth", "2"]);
    assert_eq!(stdout(&out), "nodes=4 edges=4\nreach=1,3,4\n");
    let (code, err) = failure(&citenet(dir.path(), &["neighborhood", "f7.txt", "--node", "99"]));
    assert_eq!(code, 2);
    assert!(err.contains("99"));
}

#[test]
fn merge_small_prints_a_ledger() {
    let dir = workspace();
    fs::write(dir.path().join("g.txt"), format!("{F7}7 8\n7 2\n")).unwrap();
    fs::write(dir.path().join("p.tsv"), "0\t0\n1\t0\n2\t0\n3\t0\n4\t0\n5\t0\n6\t0\n7\t1\n8\t1\n").unwrap();
    let out = citenet(dir.path(), &["merge-small", "g.txt", "--partition", "p.tsv", "--min-size", "3", "--out", "m.tsv"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.lines().any(|l| l.starts_with("cluster 1 → cluster 0")), "{text}");
    assert!(text.contains("clusters before=2 after=1\n"));
    assert!(read(dir.path(), "m.tsv").lines().all(|l| l.ends_with("\t0")));
}

#[test]
fn merge_small_reports_isolated_clusters() {
    let dir = workspace();
    fs::write(dir.path().join("g.txt"), format!("{F7}7 8\n")).unwrap();
    fs::write(dir.path().join("p.tsv"), "0\t0\n1\t0\n2\t0\n3\t0\n4\t0\n5\t0\n6\t0\n7\t1\n8\t1\n").unwrap();
    let out = citenet(dir.path(), &["merge-small", "g.txt", "--partition", "p.tsv", "--min-size", "3", "--out", "m.tsv"]);
    assert!(stdout(&out).contains("cluster 1 (size 2) unmerged: no external edges\n"));
}

#[test]
fn generate_writes_graph_and_labels() {
    let dir = workspace();
    let args = ["generate", "--sizes", "30,30", "--p-in", "0.3", "--p-out", "0.01", "--seed", "3", "--out", "g.txt", "--labels", "l.tsv"];
    let out = citenet(dir.path(), &args);
    assert!(out.status.success(), "{}", stderr(&out));
    let first = read(dir.path(), "g.txt");
    assert!(read(dir.path(), "l.tsv").starts_with("0\tblock0\n"));
    assert!(read(dir.path(), "l.tsv").ends_with("59\tblock1\n"));
    citenet(dir.path(), &args);
    assert_eq!(read(dir.path(), "g.txt"), first);

    let out = citenet(dir.path(), &["cluster", "g.txt", "--out", "p.tsv"]);
    assert!(stdout(&out).contains("clusters=2"));
    let out = citenet(dir.path(), &["eval", "g.txt", "--partition", "p.tsv", "--labels", "l.tsv", "--report-dir", "rep"]);
    assert!(out.status.success());
    assert!(read(dir.path(), "rep/purity.csv").lines().skip(1).all(|l| l.ends_with(",1")));

    let (code, _) = failure(&citenet(dir.path(), &["generate", "--sizes", "3", "--p-in", "1.5", "--p-out", "0", "--out", "x.txt"]));
    assert_eq!(code, 1);
}

#[test]
fn rerun_reproduces_outputs() {
    let dir = workspace();
    citenet(dir.path(), &["generate", "--sizes", "40,40,40", "--p-in", "0.2", "--p-out", "0.02", "--seed", "9", "--out", "g.txt"]);
    let out = citenet(dir.path(), &["cluster", "g.txt", "--algo", "louvain", "--seed", "5", "--out", "p.tsv"]);
    assert!(out.status.success());
    let partition = read(dir.path(), "p.tsv");
    fs::remove_file(dir.path().join("p.tsv")).unwrap();

    // Replay from another directory: the manifest records where it ran.
    let elsewhere = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("p.tsv.manifest");
    let out = citenet(elsewhere.path(), &["rerun", manifest.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).starts_with("rerun cluster g.txt --algo louvain --seed 5 --out p.tsv\n"));
    assert_eq!(read(dir.path(), "p.tsv"), partition);
}

#[test]
fn rerun_rejects_a_broken_manifest() {
    let dir = workspace();
    fs::write(dir.path().join("bad.manifest"), "command=cluster\n").unwrap();
    let (code, _) = failure(&citenet(dir.path(), &["rerun", "bad.manifest"]));
    assert_eq!(code, 2);
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    let dir = workspace();
    citenet(dir.path(), &["generate", "--sizes", "300,300,300", "--p-in", "0.05", "--p-out", "0.002", "--seed", "1", "--out", "g.txt"]);
    let mut partitions = Vec::new();
    for threads in ["1", "4", "1"] {
        let out = Command::new(env!("CARGO_BIN_EXE_citenet"))
            .args(["cluster", "g.txt", "--seed", "2", "--out", "p.tsv"])
            .current_dir(dir.path())
            .env("CITENET_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success());
        partitions.push(read(dir.path(), "p.tsv"));
    }
    assert!(partitions.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn bad_thread_setting_is_a_usage_error() {
    let dir = workspace();
    let out = Command::new(env!("CARGO_BIN_EXE_citenet"))
        .args(["stats", "f7.txt"])
        .current_dir(dir.path())
        .env("CITENET_THREADS", "many")
        .output()
        .unwrap();
    let (code, err) = failure(&out);
    assert_eq!(code, 1);
    assert!(err.contains("CITENET_THREADS"));
}

#[test]
fn usage_errors_are_single_lines() {
    let dir = workspace();
    for args in [&[][..], &["bogus"][..], &["stats"][..], &["neighborhood", "f7.txt", "--node", "x"][..]] {
        let (code, _) = failure(&citenet(dir.path(), args));
        assert_eq!(code, 1, "{args:?}");
    }
    let help = citenet(dir.path(), &["--help"]);
    assert!(help.status.success());
    assert!(stdout(&help).contains("merge-small"));
}
