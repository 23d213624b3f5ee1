use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::clustering::{quality, Partition, Resolution};
use crate::graph::{Graph, LabelMap};

use super::{
    cluster_purity, cluster_sizes, label_fragmentation, link_matrix, link_summary, EvalError,
    FragmentationRow, LinkMatrix, LinkSummary, PurityRow,
};

/// `x` as a percentage with two decimals, e.g. `0.95477` → `"95.48%"`.
pub fn format_percent(x: f64) -> String {
    format!("{:.2}%", 100.0 * x)
}

/// `x` rounded to `digits` significant digits, without exponent notation.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// All evaluation outputs for one partition of one graph.
#[derive(Debug, Clone)]
pub struct ClusterReport {
    pub n: usize,
    pub m: usize,
    /// `(cluster_id, size)` by descending size.
    pub sizes: Vec<(usize, usize)>,
    pub link_matrix: LinkMatrix,
    pub summary: LinkSummary,
    pub resolution: Resolution,
    pub quality: f64,
    pub fragmentation: Option<Vec<FragmentationRow>>,
    pub purity: Option<Vec<PurityRow>>,
}

impl ClusterReport {
    pub fn build(
        g: &Graph,
        p: &Partition,
        labels: Option<&LabelMap>,
        resolution: Resolution,
    ) -> Result<Self, EvalError> {
        let lm = link_matrix(g, p)?;
        let summary = link_summary(&lm)?;
        let (fragmentation, purity) = match labels {
            Some(l) => (Some(label_fragmentation(p, l)?), Some(cluster_purity(p, l)?)),
            None => (None, None),
        };
        // Coverage is already checked, and an edgeless graph fails link_summary.
        let quality = quality(g, p, resolution).expect("partition covers graph");
        Ok(ClusterReport {
            n: g.n(),
            m: g.m(),
            sizes: cluster_sizes(p),
            link_matrix: lm,
            summary,
            resolution,
            quality,
            fragmentation,
            purity,
        })
    }

    /// Writes the report files into `dir` (which must exist) and returns
    /// their paths: sizes, link matrix and summary always, fragmentation and
    /// purity when labels were supplied.
    pub fn write_to_dir(&self, dir: &Path) -> io::Result<Vec<PathBuf>> {
        let mut written = Vec::new();
        let mut emit = |name: &str, f: &dyn Fn(&mut dyn Write) -> io::Result<()>| {
            let path = dir.join(name);
            let mut out = BufWriter::new(File::create(&path)?);
            f(&mut out)?;
            out.flush()?;
            written.push(path);
            Ok::<_, io::Error>(())
        };
        emit("sizes.csv", &|w| self.write_sizes(w))?;
        emit("link_matrix.csv", &|w| self.write_link_matrix(w))?;
        emit("summary.txt", &|w| self.write_summary(w))?;
        if self.fragmentation.is_some() {
            emit("fragmentation.csv", &|w| self.write_fragmentation(w))?;
        }
        if self.purity.is_some() {
            emit("purity.csv", &|w| self.write_purity(w))?;
        }
        Ok(written)
    }

    pub fn write_sizes(&self, w: &mut dyn Write) -> io::Result<()> {
        writeln!(w, "cluster_id,size")?;
        for (c, s) in &self.sizes {
            writeln!(w, "{c},{s}")?;
        }
        Ok(())
    }

    /// Dense `k × k` matrix, one row per line, no header.
    pub fn write_link_matrix(&self, w: &mut dyn Write) -> io::Result<()> {
        let k = self.link_matrix.k();
        let mut rows: Vec<Vec<(usize, u64)>> = vec![Vec::new(); k];
        for (i, j, c) in self.link_matrix.entries() {
            rows[i].push((j, c));
            if i != j {
                rows[j].push((i, c));
            }
        }
        let mut line = String::new();
        for mut row in rows {
            row.sort_unstable();
            let mut next = row.into_iter().peekable();
            line.clear();
            for j in 0..k {
                if j > 0 {
                    line.push(',');
                }
                match next.peek() {
                    Some(&(col, c)) if col == j => {
                        line.push_str(&c.to_string());
                        next.next();
                    }
                    _ => line.push('0'),
                }
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    pub fn write_summary(&self, w: &mut dyn Write) -> io::Result<()> {
        let s = &self.summary;
        writeln!(w, "nodes={}", self.n)?;
        writeln!(w, "edges={}", self.m)?;
        writeln!(w, "clusters={}", self.sizes.len())?;
        writeln!(w, "intra={}", s.intra)?;
        writeln!(w, "inter={}", s.inter)?;
        writeln!(w, "intra_fraction={}", format_significant(s.intra_fraction, 4))?;
        writeln!(w, "intra_percent={}", format_percent(s.intra_fraction))?;
        writeln!(w, "inter_percent={}", format_percent(1.0 - s.intra_fraction))?;
        writeln!(w, "resolution={}", self.resolution)?;
        writeln!(w, "quality={}", self.quality)?;
        writeln!(w, "reciprocal_citations=collapsed_to_weight_1")?;
        Ok(())
    }

    pub fn write_fragmentation(&self, w: &mut dyn Write) -> io::Result<()> {
        writeln!(w, "label,total,n_clusters,dominant_cluster,concentration")?;
        for r in self.fragmentation.iter().flatten() {
            writeln!(
                w,
                "{},{},{},{},{}",
                r.label, r.total, r.n_clusters, r.dominant_cluster, r.concentration
            )?;
        }
        Ok(())
    }

    pub fn write_purity(&self, w: &mut dyn Write) -> io::Result<()> {
        writeln!(w, "cluster_id,size,dominant_label,purity")?;
        for r in self.purity.iter().flatten() {
            writeln!(w, "{},{},{},{}", r.cluster, r.size, r.dominant_label, r.purity)?;
        }
        Ok(())
    }
}
