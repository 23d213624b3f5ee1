use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use citenet::analysis::{degree_stats, neighborhood_census, reach_profile, top_degree_nodes};
use citenet::clustering::{
    leiden_run, louvain_run, quality, read_partition, spectral_cluster, write_partition, ClusteringConfig,
    Partition, Resolution,
};
use citenet::evaluation::{format_percent, merge_small_clusters, ClusterReport, UnmergedReason};
use citenet::generate::stochastic_block_model;
use citenet::graph::{
    build_graph, largest_connected_component, load_labels, parse_edge_list, prune_low_degree,
    write_edge_list, write_mapping, Graph, LabelMap, NodeMapping,
};

use crate::error::CliError;
use crate::manifest::{manifest_path, RunManifest};
use crate::{
    Algo, CleanArgs, ClusterArgs, EvalArgs, GenerateArgs, MergeSmallArgs, NeighborhoodArgs,
    RerunArgs, StatsArgs,
};

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::io(path, e))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

fn write_with<F>(path: &Path, body: F) -> Result<(), CliError>
where
    F: FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
{
    let mut w = create(path)?;
    body(&mut w).and_then(|_| w.flush()).map_err(|e| CliError::io(path, e))
}

fn load_graph(path: &Path) -> Result<Graph, CliError> {
    let list = parse_edge_list(open(path)?).map_err(|e| CliError::io(path, e))?;
    Ok(build_graph(&list))
}

fn load_partition(path: &Path, g: &Graph) -> Result<Partition, CliError> {
    read_partition(open(path)?, g.n()).map_err(|e| CliError::io(path, e))
}

fn load_label_file(path: &Path, g: &Graph) -> Result<LabelMap, CliError> {
    load_labels(open(path)?, g).map_err(|e| CliError::io(path, e))
}

fn resolution(gamma: f64) -> Result<Resolution, CliError> {
    Ok(Resolution::new(gamma)?)
}

pub fn stats(a: &StatsArgs) -> Result<(), CliError> {
    let g = load_graph(&a.graph)?;
    let s = degree_stats(&g)?;
    let out = a.out_dir.join("degree_histogram.csv");
    write_with(&out, |w| {
        writeln!(w, "degree,count")?;
        for (d, c) in &s.histogram {
            writeln!(w, "{d},{c}")?;
        }
        Ok(())
    })?;
    println!("nodes={} edges={}", g.n(), g.m());
    println!("min={} max={} mean={:.2} median={}", s.min, s.max, s.mean, s.median);
    if let Some(k) = a.top {
        for (u, d) in top_degree_nodes(&g, k)? {
            println!("hub node={u} degree={d}");
        }
    }
    Ok(())
}

pub fn clean(a: &CleanArgs, argv: &[String]) -> Result<(), CliError> {
    let start = Instant::now();
    let g = load_graph(&a.graph)?;
    println!("before n={} m={}", g.n(), g.m());
    let mut current = g;
    let mut mapping = NodeMapping::identity(current.n());
    if a.keep_lcc {
        let (lcc, to_lcc) = largest_connected_component(&current)?;
        mapping = mapping.then(&to_lcc);
        current = lcc;
    }
    if let Some(k) = a.prune_degree {
        let (pruned, to_pruned) = prune_low_degree(&current, k, a.iterative)?;
        mapping = mapping.then(&to_pruned);
        current = pruned;
    }
    println!("after n={} m={}", current.n(), current.m());

    let mapping_path = a.mapping.clone().unwrap_or_else(|| {
        a.out
            .parent()
            .map_or_else(|| PathBuf::from("mapping.tsv"), |d| d.join("mapping.tsv"))
    });
    write_with(&a.out, |w| write_edge_list(&current, w))?;
    write_with(&mapping_path, |w| write_mapping(&mapping, w))?;

    let mut m = RunManifest::new("clean", argv);
    m.inputs.push(a.graph.clone());
    m.param("keep_lcc", a.keep_lcc);
    m.param("prune_degree", a.prune_degree.map_or("none".to_string(), |k| k.to_string()));
    m.param("iterative", a.iterative);
    m.outputs.extend([a.out.clone(), mapping_path]);
    m.result("nodes", current.n()).result("edges", current.m());
    m.duration = start.elapsed();
    m.write(&manifest_path(&a.out))
}

pub fn cluster(a: &ClusterArgs, argv: &[String]) -> Result<(), CliError> {
    let start = Instant::now();
    match (a.algo, a.k) {
        (Algo::Spectral, None) => return Err(CliError::Usage("--algo spectral requires --k".into())),
        (Algo::Louvain | Algo::Leiden, Some(_)) => {
            return Err(CliError::Usage("--k applies only to --algo spectral".into()))
        }
        _ => {}
    }
    let gamma = resolution(a.resolution)?;
    let seed = a.seed.unwrap_or(0);
    let mut cfg = ClusteringConfig::default().with_resolution(gamma).with_seed(seed);
    if let Some(cap) = a.spectral_cap {
        cfg.spectral_size_cap = cap;
    }
    let g = load_graph(&a.graph)?;
    let (p, levels) = match a.algo {
        Algo::Louvain | Algo::Leiden => {
            let run = if a.algo == Algo::Louvain {
                louvain_run(&g, &cfg)?
            } else {
                leiden_run(&g, &cfg)?
            };
            (run.partition, Some(run.levels.len()))
        }
        Algo::Spectral => (spectral_cluster(&g, a.k.unwrap_or(0), &cfg)?, None),
    };
    let q = quality(&g, &p, gamma)?;
    write_with(&a.out, |w| write_partition(&p, w))?;
    println!(
        "algo={} seed={seed} resolution={gamma} clusters={} quality={q}",
        a.algo.name(),
        p.k()
    );

    let mut m = RunManifest::new("cluster", argv);
    m.inputs.push(a.graph.clone());
    m.param("algo", a.algo.name()).param("resolution", gamma).param("seed", seed);
    if let Some(k) = a.k {
        m.param("k", k);
    }
    if a.algo == Algo::Spectral {
        m.param("spectral_cap", cfg.spectral_size_cap);
    }
    m.outputs.push(a.out.clone());
    if let Some(levels) = levels {
        m.result("levels", levels);
    }
    m.result("clusters", p.k()).result("quality", q);
    m.duration = start.elapsed();
    m.write(&manifest_path(&a.out))
}

pub fn eval(a: &EvalArgs) -> Result<(), CliError> {
    let gamma = resolution(a.resolution)?;
    let g = load_graph(&a.graph)?;
    let p = load_partition(&a.partition, &g)?;
    let labels = a.labels.as_deref().map(|l| load_label_file(l, &g)).transpose()?;
    let report = ClusterReport::build(&g, &p, labels.as_ref(), gamma)?;
    std::fs::create_dir_all(&a.report_dir).map_err(|e| CliError::io(&a.report_dir, e))?;
    let written = report
        .write_to_dir(&a.report_dir)
        .map_err(|e| CliError::io(&a.report_dir, e))?;
    let s = &report.summary;
    println!(
        "clusters={} intra={} inter={} intra_percent={} quality={}",
        p.k(),
        s.intra,
        s.inter,
        format_percent(s.intra_fraction),
        report.quality
    );
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

pub fn neighborhood(a: &NeighborhoodArgs) -> Result<(), CliError> {
    let g = load_graph(&a.graph)?;
    let c = neighborhood_census(&g, a.node, a.depth)?;
    let r = reach_profile(&g, a.node, a.depth)?;
    println!("nodes={} edges={}", c.n_nodes, c.n_edges);
    let reach: Vec<String> = r.cumulative.iter().map(|x| x.to_string()).collect();
    println!("reach={}", reach.join(","));
    Ok(())
}

pub fn merge_small(a: &MergeSmallArgs, argv: &[String]) -> Result<(), CliError> {
    let start = Instant::now();
    let gamma = resolution(a.resolution)?;
    let g = load_graph(&a.graph)?;
    let p = load_partition(&a.partition, &g)?;
    let outcome = merge_small_clusters(&g, &p, a.min_size)?;
    for d in &outcome.merges {
        println!(
            "cluster {} → cluster {} ({} of {} external edges)",
            d.from, d.to, d.edges_to_target, d.external_edges
        );
    }
    for u in &outcome.unmerged {
        let why = match u.reason {
            UnmergedReason::NoExternalEdges => "no external edges",
            UnmergedReason::NoMajority => "no majority target",
        };
        println!("cluster {} (size {}) unmerged: {why}", u.cluster, u.size);
    }
    let before = quality(&g, &p, gamma)?;
    let after = quality(&g, &outcome.partition, gamma)?;
    println!("clusters before={} after={}", p.k(), outcome.partition.k());
    println!("quality before={before} after={after}");
    write_with(&a.out, |w| write_partition(&outcome.partition, w))?;

    let mut m = RunManifest::new("merge-small", argv);
    m.inputs.extend([a.graph.clone(), a.partition.clone()]);
    m.param("min_size", a.min_size).param("resolution", gamma);
    m.outputs.push(a.out.clone());
    m.result("merges", outcome.merges.len())
        .result("unmerged", outcome.unmerged.len())
        .result("quality_before", before)
        .result("quality_after", after);
    m.duration = start.elapsed();
    m.write(&manifest_path(&a.out))
}

pub fn generate(a: &GenerateArgs, argv: &[String]) -> Result<(), CliError> {
    let start = Instant::now();
    let seed = a.seed.unwrap_or(0);
    let planted = stochastic_block_model(&a.sizes, a.p_in, a.p_out, seed)?;
    write_with(&a.out, |w| {
        for (u, v) in &planted.edges {
            writeln!(w, "{u} {v}")?;
        }
        Ok(())
    })?;
    if let Some(path) = &a.labels {
        write_with(path, |w| {
            for (u, b) in planted.blocks.iter().enumerate() {
                writeln!(w, "{u}\tblock{b}")?;
            }
            Ok(())
        })?;
    }
    println!("seed={seed} nodes={} edges={}", planted.n, planted.edges.len());

    let mut m = RunManifest::new("generate", argv);
    let sizes: Vec<String> = a.sizes.iter().map(|s| s.to_string()).collect();
    m.param("sizes", sizes.join(","))
        .param("p_in", a.p_in)
        .param("p_out", a.p_out)
        .param("seed", seed);
    m.outputs.push(a.out.clone());
    m.outputs.extend(a.labels.clone());
    m.result("nodes", planted.n).result("edges", planted.edges.len());
    m.duration = start.elapsed();
    m.write(&manifest_path(&a.out))
}

/// Command line recorded in a manifest, after moving to its working directory.
pub fn rerun_argv(a: &RerunArgs) -> Result<Vec<String>, CliError> {
    let text = std::fs::read_to_string(&a.manifest).map_err(|e| CliError::io(&a.manifest, e))?;
    let m = RunManifest::parse(&text).map_err(|e| CliError::io(&a.manifest, e))?;
    if m.command == "rerun" || m.argv.first().map(String::as_str) != Some(m.command.as_str()) {
        return Err(CliError::io(&a.manifest, "manifest does not record a replayable command"));
    }
    if !m.cwd.as_os_str().is_empty() {
        std::env::set_current_dir(&m.cwd).map_err(|e| CliError::io(&m.cwd, e))?;
    }
    println!("rerun {}", m.argv.join(" "));
    let mut argv = vec!["citenet".to_string()];
    argv.extend(m.argv);
    Ok(argv)
}
