//! Rendering of regions, bounds and graphs.
//!
//! Text output prints 6 decimals. CSV output prints floats in shortest
//! round-trip form so downstream tools lose no precision.

use std::fmt::Write as _;

use crate::bounds::{BoundReport, ComparisonReport};
use crate::grouping::{CorrelationGraph, Partition};
use crate::region::{Admissibility, RegionInequality, TwoNodeBoundary};

fn join_nodes(nodes: &[usize], sep: &str) -> String {
    nodes
        .iter()
        .map(|i| (i + 1).to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

fn rate_sum(q: &RegionInequality) -> String {
    q.subset()
        .iter()
        .map(|i| format!("R{}", i + 1))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn entropy_label(q: &RegionInequality, n: usize) -> String {
    let inside = q.subset();
    let outside: Vec<usize> = (0..n).filter(|i| !inside.contains(i)).collect();
    let xs = |s: &[usize]| {
        s.iter()
            .map(|i| format!("X{}", i + 1))
            .collect::<Vec<_>>()
            .join(",")
    };
    if outside.is_empty() {
        format!("H({})", xs(&inside))
    } else {
        format!("H({}|{})", xs(&inside), xs(&outside))
    }
}

/// `slacks` comes from testing a rate vector against the same inequalities.
pub fn region_text(n: usize, inequalities: &[RegionInequality], slacks: Option<&Admissibility>) -> String {
    let mut out = format!("region: N={n}, {} inequalities\n", inequalities.len());
    let width = inequalities
        .iter()
        .map(|q| rate_sum(q).len())
        .max()
        .unwrap_or(0);
    for (idx, q) in inequalities.iter().enumerate() {
        let _ = write!(
            out,
            "{:<width$} >= {:.6}  {}",
            rate_sum(q),
            q.lower_bound.bits(),
            entropy_label(q, n)
        );
        if let Some(adm) = slacks {
            let slack = adm.slacks[idx].1;
            let mark = if slack < -crate::region::MEMBERSHIP_TOL { "  VIOLATED" } else { "" };
            let _ = write!(out, "  slack {slack:.6}{mark}");
        }
        out.push('\n');
    }
    if let Some(adm) = slacks {
        let _ = writeln!(out, "admissible: {}", adm.admissible);
    }
    out
}

pub fn region_csv(inequalities: &[RegionInequality], slacks: Option<&Admissibility>) -> String {
    let mut out = String::from("subset,lower_bound_bits");
    if slacks.is_some() {
        out.push_str(",rate_sum,slack");
    }
    out.push('\n');
    for (idx, q) in inequalities.iter().enumerate() {
        let _ = write!(out, "{},{}", join_nodes(&q.subset(), "+"), q.lower_bound.bits());
        if let Some(adm) = slacks {
            let slack = adm.slacks[idx].1;
            let _ = write!(out, ",{},{}", slack + q.lower_bound.bits(), slack);
        }
        out.push('\n');
    }
    out
}

/// Plot data for the two-source region: polyline vertices, the minimum
/// individual rates, and the axis intercepts of the sum-rate line.
pub fn boundary_csv(b: &TwoNodeBoundary) -> String {
    let mut out = String::from("kind,r1,r2\n");
    for (r1, r2) in b.vertices() {
        let _ = writeln!(out, "vertex,{r1},{r2}");
    }
    let _ = writeln!(out, "asymptote,{},{}", b.r1_min, b.r2_min);
    let _ = writeln!(out, "sum_intercept,{},0", b.sum_rate);
    let _ = writeln!(out, "sum_intercept,0,{}", b.sum_rate);
    out
}

pub fn bound_text(r: &BoundReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "bound: {}", r.config_name);
    let _ = writeln!(out, "ordering: {}", join_nodes(&r.ordering, ","));
    let labels: Vec<String> = r.terms.iter().map(|t| t.label()).collect();
    let width = labels.iter().map(String::len).max().unwrap_or(4).max(4);
    let _ = writeln!(out, "  {:<width$}  bits", "term");
    for (label, t) in labels.iter().zip(&r.terms) {
        let _ = writeln!(out, "  {label:<width$}  {:.6}", t.value.bits());
    }
    for g in &r.groups {
        let _ = writeln!(out, "group {{{}}}: {:.6}", join_nodes(&g.members, ","), g.total.bits());
    }
    let _ = writeln!(out, "total: {:.6}", r.total.bits());
    let _ = writeln!(out, "joint entropy: {:.6}", r.joint_entropy.bits());
    let _ = writeln!(out, "penalty: {:.6} bits ({:.6}%)", r.penalty, r.penalty_pct());
    out
}

pub fn bounds_csv(reports: &[BoundReport]) -> String {
    let mut out = String::from("config,term,target,given,bits\n");
    for r in reports {
        for t in &r.terms {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.config_name,
                t.label().replace(',', " "),
                t.target + 1,
                join_nodes(&t.given, " "),
                t.value.bits()
            );
        }
        let _ = writeln!(out, "{},total,,,{}", r.config_name, r.total.bits());
    }
    out
}

pub fn comparison_csv(c: &ComparisonReport) -> String {
    let mut out = String::from("config,total_bits,penalty_bits,penalty_pct\n");
    for row in &c.rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            row.config,
            row.total.bits(),
            row.penalty,
            row.penalty_pct
        );
    }
    out
}

pub fn comparison_text(c: &ComparisonReport) -> String {
    let width = c.rows.iter().map(|r| r.config.len()).max().unwrap_or(6).max(6);
    let mut out = format!("joint entropy: {:.6}\n", c.joint_entropy.bits());
    let _ = writeln!(out, "{:<width$}  {:>10}  {:>10}  {:>11}", "config", "total", "penalty", "penalty_pct");
    for row in &c.rows {
        let _ = writeln!(
            out,
            "{:<width$}  {:>10.6}  {:>10.6}  {:>10.6}%",
            row.config,
            row.total.bits(),
            row.penalty,
            row.penalty_pct
        );
    }
    out
}

/// Adjacency matrix with a header row of 1-based node numbers.
pub fn adjacency_csv(g: &CorrelationGraph) -> String {
    let header: Vec<String> = (1..=g.n()).map(|i| i.to_string()).collect();
    let mut out = format!("node,{}\n", header.join(","));
    for (i, row) in g.matrix().iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(out, "{},{}", i + 1, cells.join(","));
    }
    out
}

pub fn graph_text(g: &CorrelationGraph, p: &Partition) -> String {
    let mut out = format!(
        "graph: {} nodes, metric {}, tau {}, {} edges\n",
        g.n(),
        g.metric_id(),
        g.tau(),
        g.edge_count()
    );
    for i in 0..g.n() {
        for j in i + 1..g.n() {
            if g.is_edge(i, j) {
                let _ = writeln!(out, "  {} -- {}  {:.6}", i + 1, j + 1, g.matrix()[i][j]);
            }
        }
    }
    let _ = writeln!(out, "components: {}", p.k());
    for grp in p.groups() {
        let _ = writeln!(out, "  {{{}}}", join_nodes(grp, ","));
    }
    out
}
