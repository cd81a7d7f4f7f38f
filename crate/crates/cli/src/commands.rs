//! One function per subcommand. Each loads its inputs, fans independent
//! cells out over a worker pool, and assembles a report in input order.

use std::path::Path;

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde_json::json;

use costbeta_core::cost::{graphing_cost, principal_cost};
use costbeta_core::group::{
    abelianized_rank_bounds, free_subgroup_rank, rank_gradient_row, relator_deviation,
    schreier_graph, RankGradientTable,
};
use costbeta_core::groupoid::{fix_free_decompose, LengthConvention};
use costbeta_core::homology::{
    average_betti, beta_d_table, betti, elek_cell, euler_characteristic, laplacian_kernel_dim,
    local_connectivity, nabla_fiber, rips_complex, BetaDOptions, BetaDTable, ElekOptions,
    ElekTable,
};
use costbeta_core::linalg::Scalars;
use costbeta_core::lipschitz::{
    ccost_cell, embeds, lip_cost_exact, lip_cost_heuristic, CcostOptions, CcostTable,
    EmbedOptions, ExactCaps, HeuristicOptions, SolverMode,
};
use costbeta_core::manifest::{eval_actions, eval_complex, eval_graphs, eval_matrix, Expr};
use costbeta_core::spectral::{
    kernel_dim_exact, lueck_bound_check, nonzero_product_check, spectral_histogram, KernelRow,
    KernelSequenceReport,
};
use costbeta_core::{io, CostValue, Error, PermutationAction, Rational, SequenceManifest};

use crate::plot::{svg, Series};
use crate::report::{cell, Report};
use crate::{Cli, Command, InputError, Solver};

pub enum Outcome {
    Report { report: Report, plot: Option<String> },
    /// A generated instance file.
    Instance(String),
}

fn input(msg: impl Into<String>) -> anyhow::Error {
    InputError(msg.into()).into()
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_manifest(path: &Path) -> Result<SequenceManifest> {
    SequenceManifest::load(path).with_context(|| format!("manifest {}", path.display()))
}

fn is_manifest(text: &str) -> bool {
    text.contains("\"schema_version\"")
}

fn frac(c: CostValue) -> [String; 2] {
    [c.numer().to_string(), c.denom().to_string()]
}

fn rfrac(r: Rational) -> [String; 2] {
    [r.numer().to_string(), r.denom().to_string()]
}

fn rstr(r: Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn parse_field(s: &str) -> Result<Scalars> {
    Scalars::parse(s).ok_or_else(|| input(format!("field must be `q` or `fp:P` with P prime, got `{s}`")))
}

fn field_name(s: Scalars) -> String {
    match s {
        Scalars::Rationals => "q".into(),
        Scalars::Prime(p) => format!("fp:{p}"),
    }
}

/// Maps `f` over `items` on `jobs` workers, keeping input order.
fn par_map<T: Sync, U: Send>(
    jobs: Option<usize>,
    items: &[T],
    f: impl Fn(&T) -> U + Sync + Send,
) -> Result<Vec<U>> {
    if jobs == Some(0) {
        return Err(input("--jobs must be at least 1"));
    }
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        b = b.num_threads(j);
    }
    let pool = b.build().context("starting worker pool")?;
    Ok(pool.install(|| items.par_iter().map(&f).collect()))
}

/// Size caps become per-row errors; anything else aborts the run.
fn capped<T>(r: costbeta_core::Result<T>) -> Result<std::result::Result<T, String>> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(e @ Error::SizeCap { .. }) => Ok(Err(e.to_string())),
        Err(e) => Err(e.into()),
    }
}

fn finish(report: Report, plot: Option<String>) -> Result<Outcome> {
    Ok(Outcome::Report { report, plot })
}

pub fn execute(cli: &Cli, job: Vec<String>) -> Result<Outcome> {
    let jobs = cli.jobs;
    match &cli.command {
        Command::Cost { graphing } => cost(job, graphing),
        Command::Decompose { graphing, bisection } => decompose(job, graphing, *bisection),
        Command::Embeds { sub, sup, l, indexed, strict } => {
            embeds_cmd(job, sub, sup, *l, *indexed, *strict)
        }
        Command::Lipcost { graph, l, exact, heuristic } => {
            lipcost(job, cli.seed, graph, *l, *exact, *heuristic)
        }
        Command::Ccost { manifest, l_max, n0, solver, degree_bound } => {
            ccost(job, jobs, cli.seed, manifest, *l_max, *n0, *solver, *degree_bound)
        }
        Command::Schreier { action } => schreier(job, action),
        Command::RankGradient { chain } => rank_gradient(job, jobs, chain),
        Command::Farber { action, r, labeled } => farber(job, jobs, action, r, *labeled),
        Command::Rips { graph, q, dmax, save } => rips(job, graph, *q, *dmax, save.as_deref()),
        Command::Betti { complex, i, field, laplacian } => {
            betti_cmd(job, jobs, complex, *i, field, *laplacian)
        }
        Command::Nabla { sub, sup, i } => nabla_cmd(job, jobs, sub, sup, *i),
        Command::BetaD { manifest, d, qgrid, pgrid, n0, field } => {
            beta_d(job, jobs, manifest, *d, qgrid.clone(), pgrid.clone(), *n0, field)
        }
        Command::ElekBeta { manifest, qgrid, n0, field, budget } => {
            elek(job, jobs, manifest, qgrid.clone(), *n0, field, *budget)
        }
        Command::Connectivity { graph, q, inner, outer, k } => {
            connectivity(job, graph, *q, *inner, *outer, *k)
        }
        Command::Spectral { matrix, bins } => spectral(job, matrix, *bins),
        Command::LueckCheck { matrix, eps } => lueck(job, matrix, eps),
        Command::KernelSeq { manifest, window } => kernel_seq(job, jobs, manifest, *window),
        Command::Generate { family, params, base } => generate(cli.seed, family, params, base),
    }
}

fn cost(job: Vec<String>, path: &Path) -> Result<Outcome> {
    let g = io::read_graphing(&read(path)?)?;
    let mut r = Report::new(
        "cost",
        job,
        vec!["instance", "n", "orbits", "cost_num", "cost_den", "principal_num", "principal_den"],
    );
    let c = graphing_cost(&g);
    let p = principal_cost(&g);
    let orbits = g.orbit_partition().len();
    let [cn, cd] = frac(c);
    let [pn, pd] = frac(p);
    r.push(
        json!({"instance": path.display().to_string(), "n": g.base().size(), "orbits": orbits,
               "cost": c, "principal_cost": p, "bisections": g.len()}),
        vec![path.display().to_string(), cell(g.base().size()), cell(orbits), cn, cd, pn, pd],
    );
    finish(r, None)
}

/// True when `covered / free ≥ 1 − (2/3)^k`, compared exactly.
fn meets_coverage(covered: u128, free: u128, k: u32) -> bool {
    match (3u128.checked_pow(k), 2u128.checked_pow(k)) {
        (Some(t), Some(w)) => match (covered.checked_mul(t), free.checked_mul(t - w)) {
            (Some(a), Some(b)) => a >= b,
            _ => covered == free,
        },
        // (2/3)^k · free < 1 here for any realistic pair count.
        _ => covered == free,
    }
}

fn decompose(job: Vec<String>, path: &Path, index: usize) -> Result<Outcome> {
    let g = io::read_graphing(&read(path)?)?;
    let phi = g
        .bisections()
        .get(index)
        .ok_or_else(|| input(format!("bisection {index} out of range ({} present)", g.len())))?;
    let d = fix_free_decompose(phi);
    let n = g.base().size();
    let free = d.free_pair_count();
    let mut r = Report::new(
        "decompose",
        job,
        vec!["part", "kind", "pairs", "mass_num", "mass_den", "covered", "free_total", "meets_bound"],
    );
    let mass = |k: usize| frac(CostValue::new(k as i64, n as i64).expect("positive base"));
    let [mn, md] = mass(d.isotropic.len());
    r.push(
        json!({"part": 0, "kind": "fixed", "pairs": d.isotropic.iter().collect::<Vec<_>>(),
               "mass": format!("{mn}/{md}")}),
        vec!["0".into(), "fixed".into(), cell(d.isotropic.len()), mn, md, String::new(), cell(free), String::new()],
    );
    let mut covered = 0usize;
    let mut all_ok = true;
    for (k, part) in d.free_parts.iter().enumerate() {
        covered += part.len();
        let ok = meets_coverage(covered as u128, free as u128, (k + 1) as u32);
        all_ok &= ok;
        let [mn, md] = mass(part.len());
        r.push(
            json!({"part": k + 1, "kind": "free", "pairs": part.iter().collect::<Vec<_>>(),
                   "mass": format!("{mn}/{md}"), "covered": covered, "meets_bound": ok}),
            vec![cell(k + 1), "free".into(), cell(part.len()), mn, md, cell(covered), cell(free), cell(ok)],
        );
    }
    r.summary("valid", d.is_valid_for(phi));
    r.summary("free_parts", d.free_parts.len());
    r.summary("coverage_bound_holds", all_ok);
    finish(r, None)
}

fn embeds_cmd(
    job: Vec<String>,
    sub: &Path,
    sup: &Path,
    l: usize,
    indexed: bool,
    strict: bool,
) -> Result<Outcome> {
    let psi = io::read_graphing(&read(sub)?)?;
    let phi = io::read_graphing(&read(sup)?)?;
    let convention = if indexed { LengthConvention::Indexed } else { LengthConvention::AnyGenerator };
    let opts = EmbedOptions { convention, strict };
    let mut r = Report::new("embeds", job, vec!["L", "convention", "strict", "embeds", "witness_entries"]);
    let conv = if indexed { "indexed" } else { "any-generator" };
    match capped(embeds(&psi, &phi, l, opts))? {
        Ok(w) => {
            let found = w.is_some();
            let entries = w.as_ref().map_or(0, |w| w.entries.len());
            r.push(
                json!({"L": l, "convention": conv, "strict": strict, "embeds": found,
                       "witness": w.as_ref().map(|w| &w.entries)}),
                vec![cell(l), conv.into(), cell(strict), cell(found), cell(entries)],
            );
            if let Some(w) = &w {
                r.summary("witness_verified", w.verify(&phi, l));
            }
        }
        Err(msg) => {
            r.warnings.push(msg.clone());
            r.push(
                json!({"L": l, "convention": conv, "strict": strict, "error": msg}),
                vec![cell(l), conv.into(), cell(strict), "error".into(), String::new()],
            );
        }
    }
    finish(r, None)
}

const CCOST_HEADER: [&str; 6] = ["n", "L", "cost_num", "cost_den", "exact_flag", "edges_kept"];

fn lipcost(
    job: Vec<String>,
    seed: u64,
    path: &Path,
    l: usize,
    exact: bool,
    heuristic: bool,
) -> Result<Outcome> {
    let g = io::read_graph(&read(path)?)?;
    let hopts = HeuristicOptions { seed, ..Default::default() };
    let caps = ExactCaps::default();
    let mode = if exact { "exact" } else if heuristic { "heuristic" } else { "auto" };
    let sol = if exact {
        capped(lip_cost_exact(&g, l, caps))?
    } else if heuristic {
        Ok(lip_cost_heuristic(&g, l, hopts)?)
    } else {
        match capped(lip_cost_exact(&g, l, caps))? {
            Ok(s) => Ok(s),
            Err(_) => Ok(lip_cost_heuristic(&g, l, hopts)?),
        }
    };
    let mut r = Report::new("lipcost", job, CCOST_HEADER.to_vec());
    r.provenance("seed", seed);
    r.provenance("solver", mode);
    let n = g.vertex_count();
    match sol {
        Ok(s) => {
            let [cn, cd] = frac(s.cost);
            r.push(
                json!({"n": n, "L": l, "cost": s.cost, "exact": s.exact, "edges_kept": s.edges.len(),
                       "edges": s.edges}),
                vec![cell(n), cell(l), cn, cd, cell(s.exact), cell(s.edges.len())],
            );
        }
        Err(msg) => {
            r.warnings.push(msg.clone());
            r.push(
                json!({"n": n, "L": l, "error": msg}),
                vec![cell(n), cell(l), String::new(), String::new(), "error".into(), String::new()],
            );
        }
    }
    finish(r, None)
}

#[allow(clippy::too_many_arguments)]
fn ccost(
    job: Vec<String>,
    jobs: Option<usize>,
    seed: u64,
    path: &Path,
    l_max: Option<usize>,
    n0: Option<usize>,
    solver: Solver,
    degree_bound: usize,
) -> Result<Outcome> {
    let m = load_manifest(path)?;
    let graphs = m.graphs()?;
    let l_max = l_max
        .or_else(|| m.grids.l.as_ref().and_then(|g| g.iter().copied().max()))
        .unwrap_or(8);
    if l_max == 0 {
        return Err(input("--Lmax must be at least 1"));
    }
    let opts = CcostOptions {
        l_max,
        n0: n0.unwrap_or(m.n0),
        mode: match solver {
            Solver::Auto => SolverMode::Auto,
            Solver::Exact => SolverMode::Exact,
            Solver::Heuristic => SolverMode::Heuristic,
        },
        caps: ExactCaps::default(),
        heuristic: HeuristicOptions { seed, ..Default::default() },
        degree_bound,
    };
    let tasks: Vec<(usize, usize)> = (0..graphs.len())
        .flat_map(|i| (1..=l_max).map(move |l| (i, l)))
        .collect();
    let results = par_map(jobs.or(m.jobs), &tasks, |&(i, l)| ccost_cell(i, &graphs[i], l, &opts))?;
    let mut cells = Vec::new();
    let mut failed = Vec::new();
    for (&(i, l), res) in tasks.iter().zip(results) {
        match capped(res)? {
            Ok(c) => cells.push(c),
            Err(msg) => failed.push((i, l, msg)),
        }
    }
    let table = CcostTable::assemble(cells, &graphs, &opts);

    let mut r = Report::new("ccost", job, CCOST_HEADER.to_vec());
    r.provenance("seed", seed);
    r.provenance("solver", format!("{solver:?}").to_lowercase());
    r.provenance("exact_caps", json!({"max_vertices": opts.caps.max_vertices,
                                       "max_candidates": opts.caps.max_candidates}));
    let mut fi = failed.into_iter().peekable();
    for c in &table.cells {
        while let Some((i, l, msg)) = fi.next_if(|f| (f.0, f.1) < (c.n, c.l)) {
            push_ccost_error(&mut r, i, l, msg);
        }
        let [cn, cd] = frac(c.cost);
        r.push(
            json!({"n": c.n, "vertices": c.vertices, "L": c.l, "cost": c.cost, "exact": c.exact,
                   "edges_kept": c.edges_kept}),
            vec![cell(c.n), cell(c.l), cn, cd, cell(c.exact), cell(c.edges_kept)],
        );
    }
    for (i, l, msg) in fi {
        push_ccost_error(&mut r, i, l, msg);
    }
    r.summary("l_max", l_max);
    r.summary("n0", opts.n0);
    r.summary("estimate", table.estimate.map(|c| c.to_string()));
    if table.degree_warning {
        r.warnings.push(format!("some instance exceeds the degree bound {degree_bound}"));
    }
    if table.cells.iter().any(|c| !c.exact) {
        r.summary("heuristic_cells", table.cells.iter().filter(|c| !c.exact).count());
    }
    let series: Vec<Series> = (1..=l_max)
        .map(|l| Series {
            name: format!("L={l}"),
            points: table.cells.iter().filter(|c| c.l == l).map(|c| (c.n as f64, c.cost.to_f64())).collect(),
        })
        .collect();
    finish(r, Some(svg("combinatorial cost", "n", "cost_L", &series)))
}

fn push_ccost_error(r: &mut Report, n: usize, l: usize, msg: String) {
    r.warnings.push(format!("n={n} L={l}: {msg}"));
    r.push(
        json!({"n": n, "L": l, "error": msg}),
        vec![cell(n), cell(l), String::new(), String::new(), "error".into(), String::new()],
    );
}

fn schreier(job: Vec<String>, path: &Path) -> Result<Outcome> {
    let a = io::read_action(&read(path)?)?;
    let s = schreier_graph(&a);
    let mut r = Report::new("schreier", job, vec!["source", "generator", "target"]);
    for &(v, g, w) in &s.edges {
        r.push(
            json!({"source": v, "generator": s.generators[g], "target": w}),
            vec![cell(v), s.generators[g].clone(), cell(w)],
        );
    }
    r.summary("vertices", s.vertices);
    r.summary("edges", s.edge_count());
    r.summary("loops", s.loop_count());
    r.summary("transitive", s.transitive);
    r.summary("free", s.free);
    if s.transitive {
        if s.free {
            r.summary("subgroup_rank", free_subgroup_rank(&s)?);
        } else {
            let b = abelianized_rank_bounds(&a)?;
            r.summary("subgroup_rank_bounds", json!([b.lower, b.upper]));
        }
    }
    finish(r, None)
}

/// Actions from a chain file, a single action file, or an actions manifest.
fn load_actions(path: &Path) -> Result<Vec<PermutationAction>> {
    let text = read(path)?;
    Ok(if is_manifest(&text) {
        let m = SequenceManifest::parse(&text, path.parent().unwrap_or(Path::new(".")))?;
        m.actions()?
    } else if text.contains("\"actions\"") {
        io::read_chain(&text)?
    } else {
        vec![io::read_action(&text)?]
    })
}

fn rank_gradient(job: Vec<String>, jobs: Option<usize>, path: &Path) -> Result<Outcome> {
    let chain = load_actions(path)?;
    let levels: Vec<usize> = (0..chain.len()).collect();
    let rows = par_map(jobs, &levels, |&k| rank_gradient_row(k, &chain[k]))?
        .into_iter()
        .collect::<costbeta_core::Result<Vec<_>>>()?;
    let table = RankGradientTable::from_rows(rows);
    let mut r = Report::new(
        "rank-gradient",
        job,
        vec![
            "level", "index", "rank_lower", "rank_upper", "exact_flag",
            "gradient_lower_num", "gradient_lower_den", "gradient_upper_num", "gradient_upper_den",
            "cost_lower_num", "cost_lower_den", "cost_upper_num", "cost_upper_den",
        ],
    );
    for row in &table.rows {
        let [gln, gld] = rfrac(row.gradient_lower);
        let [gun, gud] = rfrac(row.gradient_upper);
        let [cln, cld] = frac(row.cost_lower);
        let [cun, cud] = frac(row.cost_upper);
        r.push(
            serde_json::to_value(row)?,
            vec![
                cell(row.level), cell(row.index), cell(row.rank.lower), cell(row.rank.upper),
                cell(row.exact), gln, gld, gun, gud, cln, cld, cun, cud,
            ],
        );
    }
    let last = table.rows.last();
    r.summary(
        "final",
        json!({
            "level": last.map(|x| x.level),
            "gradient": table.extrapolation.map(|(a, b)| [rstr(a), rstr(b)]),
            "cost": last.map(|x| [x.cost_lower.to_string(), x.cost_upper.to_string()]),
        }),
    );
    let series = vec![
        Series {
            name: "gradient lower".into(),
            points: table.rows.iter().map(|x| (x.level as f64, ratio_f64(x.gradient_lower))).collect(),
        },
        Series {
            name: "gradient upper".into(),
            points: table.rows.iter().map(|x| (x.level as f64, ratio_f64(x.gradient_upper))).collect(),
        },
    ];
    finish(r, Some(svg("rank gradient", "level", "(rank-1)/index", &series)))
}

fn ratio_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn farber(
    job: Vec<String>,
    jobs: Option<usize>,
    path: &Path,
    radii: &[usize],
    labeled: bool,
) -> Result<Outcome> {
    let actions = if labeled {
        vec![io::read_labeled_graph(&read(path)?)?]
    } else {
        load_actions(path)?
    };
    let tasks: Vec<(usize, usize)> = (0..actions.len())
        .flat_map(|i| radii.iter().map(move |&rr| (i, rr)))
        .collect();
    let devs = par_map(jobs, &tasks, |&(i, rr)| relator_deviation(&actions[i], rr))?;
    let mut r = Report::new(
        "farber",
        job,
        vec!["instance", "degree", "R", "farber_num", "farber_den", "relator_num", "relator_den"],
    );
    r.provenance("relators_checked", !labeled);
    for (&(i, rr), d) in tasks.iter().zip(&devs) {
        let [fnum, fden] = rfrac(d.farber_part);
        let [rn, rd] = rfrac(d.relator_part);
        r.push(
            json!({"instance": i, "degree": actions[i].degree(), "R": rr,
                   "farber": rstr(d.farber_part), "relator": rstr(d.relator_part)}),
            vec![cell(i), cell(actions[i].degree()), cell(rr), fnum, fden, rn, rd],
        );
    }
    let worst = devs.iter().map(|d| d.farber_part).max();
    r.summary("max_farber", worst.map(rstr));
    finish(r, None)
}

fn rips(job: Vec<String>, path: &Path, q: usize, dmax: usize, save: Option<&Path>) -> Result<Outcome> {
    let g = io::read_graph(&read(path)?)?;
    let k = rips_complex(&g, q, dmax)?;
    if let Some(p) = save {
        std::fs::write(p, io::write_complex(&k)).with_context(|| format!("writing {}", p.display()))?;
    }
    let mut r = Report::new("rips", job, vec!["dim", "cells"]);
    for i in 0..=k.dim().unwrap_or(0) {
        r.push(json!({"dim": i, "cells": k.count(i)}), vec![cell(i), cell(k.count(i))]);
    }
    r.summary("total_cells", k.total_cells());
    r.summary("euler_characteristic", euler_characteristic(&k));
    finish(r, None)
}

fn betti_cmd(
    job: Vec<String>,
    jobs: Option<usize>,
    path: &Path,
    i: usize,
    field: &str,
    laplacian: bool,
) -> Result<Outcome> {
    let scalars = parse_field(field)?;
    let f = io::read_fibered(&read(path)?)?;
    let rows = par_map(jobs, f.fibers(), |k| {
        (betti(k, i, scalars), laplacian.then(|| laplacian_kernel_dim(k, i)))
    })?;
    let mut r = Report::new("betti", job, vec!["fiber", "i", "field", "betti", "laplacian_kernel"]);
    r.provenance("field", field_name(scalars));
    for (x, (b, lk)) in rows.iter().enumerate() {
        r.push(
            json!({"fiber": x, "i": i, "field": field_name(scalars), "betti": b, "laplacian_kernel": lk}),
            vec![cell(x), cell(i), field_name(scalars), cell(b), lk.map(cell).unwrap_or_default()],
        );
    }
    let total: usize = rows.iter().map(|x| x.0).sum();
    let avg = CostValue::new(total as i64, rows.len() as i64)?;
    if scalars == Scalars::Rationals {
        debug_assert_eq!(avg, average_betti(&f, i));
    }
    r.summary("average", avg.to_string());
    finish(r, None)
}

fn nabla_cmd(job: Vec<String>, jobs: Option<usize>, sub: &Path, sup: &Path, i: usize) -> Result<Outcome> {
    let a = io::read_fibered(&read(sub)?)?;
    let b = io::read_fibered(&read(sup)?)?;
    if a.base_size() != b.base_size() {
        return Err(Error::BaseMismatch { left: a.base_size(), right: b.base_size() }.into());
    }
    let xs: Vec<usize> = (0..a.base_size()).collect();
    let dims = par_map(jobs, &xs, |&x| nabla_fiber(a.fiber(x), b.fiber(x), i, Scalars::Rationals))?
        .into_iter()
        .collect::<costbeta_core::Result<Vec<_>>>()?;
    let mut r = Report::new("nabla", job, vec!["fiber", "i", "image_dim"]);
    for (x, d) in dims.iter().enumerate() {
        r.push(json!({"fiber": x, "i": i, "image_dim": d}), vec![cell(x), cell(i), cell(d)]);
    }
    let total: usize = dims.iter().sum();
    r.summary("nabla", CostValue::new(total as i64, dims.len() as i64)?.to_string());
    finish(r, None)
}

#[allow(clippy::too_many_arguments)]
fn beta_d(
    job: Vec<String>,
    jobs: Option<usize>,
    path: &Path,
    d: usize,
    qgrid: Option<Vec<usize>>,
    pgrid: Option<Vec<usize>>,
    n0: Option<usize>,
    field: &str,
) -> Result<Outcome> {
    let m = load_manifest(path)?;
    let graphs = m.graphs()?;
    let opts = BetaDOptions {
        d,
        q_grid: qgrid.or_else(|| m.grids.q.clone()).unwrap_or_else(|| vec![1, 2, 3]),
        p_grid: pgrid.or_else(|| m.grids.p.clone()).unwrap_or_else(|| vec![1]),
        n0: n0.unwrap_or(m.n0),
        scalars: parse_field(field)?,
    };
    let per = par_map(jobs.or(m.jobs), &graphs, |g| beta_d_table(std::slice::from_ref(g), &opts))?;
    let mut cells = Vec::new();
    let mut failed = Vec::new();
    for (pos, res) in per.into_iter().enumerate() {
        match capped(res)? {
            Ok(t) => cells.extend(t.cells.into_iter().map(|mut c| {
                c.n = pos;
                c
            })),
            Err(msg) => failed.push((pos, msg)),
        }
    }
    let table = BetaDTable::assemble(cells, &opts);
    let mut r = Report::new(
        "beta-d",
        job,
        vec!["n", "vertices", "q", "p", "image_dim", "value_num", "value_den"],
    );
    r.provenance("field", field_name(opts.scalars));
    for c in &table.cells {
        let [vn, vd] = frac(c.value);
        r.push(
            serde_json::to_value(c)?,
            vec![cell(c.n), cell(c.vertices), cell(c.q), cell(c.p), cell(c.image_dim), vn, vd],
        );
    }
    for (pos, msg) in failed {
        r.warnings.push(format!("n={pos}: {msg}"));
        r.push(
            json!({"n": pos, "error": msg}),
            vec![cell(pos), String::new(), String::new(), String::new(), "error".into(), String::new(), String::new()],
        );
    }
    r.summary("d", d);
    r.summary("n0", opts.n0);
    r.summary("corner", table.corner.map(|c| c.to_string()));
    let mut series = Vec::new();
    for &q in &opts.q_grid {
        for &p in &opts.p_grid {
            series.push(Series {
                name: format!("q={q} p={p}"),
                points: table
                    .cells
                    .iter()
                    .filter(|c| c.q == q && c.p == p)
                    .map(|c| (c.n as f64, c.value.to_f64()))
                    .collect(),
            });
        }
    }
    finish(r, Some(svg("Rips image dimension", "n", "normalized image dim", &series)))
}

fn elek(
    job: Vec<String>,
    jobs: Option<usize>,
    path: &Path,
    qgrid: Option<Vec<usize>>,
    n0: Option<usize>,
    field: &str,
    budget: usize,
) -> Result<Outcome> {
    let m = load_manifest(path)?;
    let graphs = m.graphs()?;
    let mut opts = ElekOptions {
        n0: n0.unwrap_or(m.n0),
        scalars: parse_field(field)?,
        budget,
        ..Default::default()
    };
    if let Some(q) = qgrid.or_else(|| m.grids.q.clone()) {
        opts.q_grid = q;
    }
    if opts.q_grid.is_empty() {
        return Err(input("q grid must be nonempty"));
    }
    let tasks: Vec<(usize, usize)> = (0..graphs.len())
        .flat_map(|i| opts.q_grid.iter().map(move |&q| (i, q)))
        .collect();
    let cells = par_map(jobs.or(m.jobs), &tasks, |&(i, q)| elek_cell(i, &graphs[i], q, &opts))?;
    let table = ElekTable::assemble(cells, &opts);
    let mut r = Report::new(
        "elek-beta",
        job,
        vec![
            "n", "vertices", "edges", "components", "q", "cycle_space_dim",
            "first_num", "first_den", "second_num", "second_den",
            "discrepancy_num", "discrepancy_den", "truncated",
        ],
    );
    r.provenance("field", field_name(opts.scalars));
    r.provenance("budget", budget);
    for c in &table.cells {
        let [a, b] = rfrac(c.first_form);
        let [s, t] = rfrac(c.second_form);
        let [u, v] = rfrac(c.discrepancy);
        if c.truncated {
            r.warnings.push(format!("n={} q={}: cycle enumeration truncated; dimension is a lower bound", c.n, c.q));
        }
        r.push(
            serde_json::to_value(c)?,
            vec![
                cell(c.n), cell(c.vertices), cell(c.edges), cell(c.components), cell(c.q),
                cell(c.cycle_space_dim), a, b, s, t, u, v, cell(c.truncated),
            ],
        );
    }
    r.summary("n0", opts.n0);
    r.summary("corner_first", table.corner_first.map(rstr));
    r.summary("corner_second", table.corner_second.map(rstr));
    let series: Vec<Series> = opts
        .q_grid
        .iter()
        .map(|&q| Series {
            name: format!("q={q}"),
            points: table
                .cells
                .iter()
                .filter(|c| c.q == q)
                .map(|c| (c.n as f64, ratio_f64(c.first_form)))
                .collect(),
        })
        .collect();
    finish(r, Some(svg("short-cycle beta", "n", "first form", &series)))
}

fn connectivity(job: Vec<String>, path: &Path, q: usize, inner: usize, outer: usize, k: usize) -> Result<Outcome> {
    let g = io::read_graph(&read(path)?)?;
    let rep = local_connectivity(&g, q, inner, outer, k)?;
    let mut r = Report::new("connectivity", job, vec!["vertex", "failing_degree"]);
    for &(v, deg) in &rep.failures {
        r.push(json!({"vertex": v, "failing_degree": deg}), vec![cell(v), cell(deg)]);
    }
    r.summary("vertices", rep.vertices);
    r.summary("passing", rep.passing);
    r.summary("method", "homology");
    finish(r, None)
}

fn spectral(job: Vec<String>, path: &Path, bins: usize) -> Result<Outcome> {
    let x = io::read_matrix(&read(path)?)?;
    if bins == 0 {
        return Err(input("--bins must be at least 1"));
    }
    let h = spectral_histogram(&x, bins);
    let k = h.size.max(1);
    let mut r = Report::new("spectral", job, vec!["lo", "hi", "count", "mass_num", "mass_den"]);
    for b in &h.bins {
        let count = (b.mass * k as f64).round() as i64;
        let [mn, md] = frac(CostValue::new(count, k as i64)?);
        r.push(
            json!({"lo": b.lo, "hi": b.hi, "count": count, "mass": format!("{mn}/{md}")}),
            vec![cell(b.lo), cell(b.hi), cell(count), mn, md],
        );
    }
    r.summary("size", h.size);
    r.summary("kernel_dim", h.kernel_dim);
    r.summary("zero_mass", h.zero_mass.to_string());
    r.summary("atoms", serde_json::to_value(&h.atoms)?);
    r.summary("approximate", h.approximate);
    let pts = h.bins.iter().map(|b| ((b.lo + b.hi) / 2.0, b.mass)).collect();
    finish(r, Some(svg("spectral measure", "eigenvalue", "mass", &[Series { name: "bins".into(), points: pts }])))
}

fn lueck(job: Vec<String>, path: &Path, eps: &[f64]) -> Result<Outcome> {
    let x = io::read_matrix(&read(path)?)?;
    let mut r = Report::new("lueck-check", job, vec!["eps", "lhs", "rhs", "pass"]);
    for &e in eps {
        let c = lueck_bound_check(&x, e)?;
        r.push(serde_json::to_value(&c)?, vec![cell(c.eps), cell(c.lhs), cell(c.rhs), cell(c.pass)]);
    }
    r.summary("trace_of_square", x.trace_of_square().to_string());
    match capped(nonzero_product_check(&x))? {
        Ok(p) => {
            r.summary("nonzero_product", serde_json::to_value(&p)?);
            r.summary("integrality_holds", p.holds());
        }
        Err(msg) => {
            r.warnings.push(msg.clone());
            r.summary("nonzero_product", json!({"error": msg}));
        }
    }
    finish(r, None)
}

fn kernel_seq(job: Vec<String>, jobs: Option<usize>, path: &Path, window: usize) -> Result<Outcome> {
    let m = load_manifest(path)?;
    let xs = m.matrices()?;
    let idx: Vec<usize> = (0..xs.len()).collect();
    let rows = par_map(jobs.or(m.jobs), &idx, |&n| {
        let (kernel_dim, normalized) = kernel_dim_exact(&xs[n]);
        KernelRow { n, size: xs[n].size(), kernel_dim, normalized }
    })?;
    let rep = KernelSequenceReport::from_rows(rows, window);
    let mut r = Report::new("kernel-seq", job, vec!["n", "size", "kernel_dim", "normalized_num", "normalized_den"]);
    for row in &rep.rows {
        let [a, b] = frac(row.normalized);
        r.push(serde_json::to_value(row)?, vec![cell(row.n), cell(row.size), cell(row.kernel_dim), a, b]);
    }
    r.summary("window", rep.window);
    r.summary("tail_min", rep.tail_min.map(|c| c.to_string()));
    r.summary("tail_max", rep.tail_max.map(|c| c.to_string()));
    let pts = rep.rows.iter().map(|x| (x.n as f64, x.normalized.to_f64())).collect();
    finish(r, Some(svg("normalized kernel", "n", "dim ker / size", &[Series { name: "kernel".into(), points: pts }])))
}

/// Argument count of each seeded generator, seed included.
const SEEDED: [(&str, usize); 6] = [
    ("gnp", 3),
    ("random-regular", 3),
    ("random-schreier", 3),
    ("double-cover-chain", 3),
    ("flag", 4),
    ("random-sym", 3),
];

const GRAPHS: [&str; 5] = ["cycle", "path", "complete", "gnp", "random-regular"];
const ACTIONS: [&str; 5] = ["random-schreier", "cyclic", "torus", "bouquet", "double-cover-chain"];
const COMPLEXES: [&str; 2] = ["rips", "flag"];

/// Builds the generator expression; a missing trailing seed comes from
/// `--seed`, and `double-cover-chain` takes its base from `--base`.
fn generator_expr(seed: u64, family: &str, params: &[String], base: &str) -> Result<Expr> {
    if family.contains('(') {
        return Expr::parse(family).map_err(|e| input(format!("bad expression: {e}")));
    }
    let mut args: Vec<String> = params.to_vec();
    if family == "double-cover-chain" {
        args.insert(0, base.to_string());
    }
    if let Some(&(_, arity)) = SEEDED.iter().find(|(n, _)| *n == family) {
        if args.len() + 1 == arity {
            args.push(seed.to_string());
        }
    }
    let text = format!("{family}({})", args.join(", "));
    Expr::parse(&text).map_err(|e| input(format!("bad parameters: {e}")))
}

fn generate(seed: u64, family: &str, params: &[String], base: &str) -> Result<Outcome> {
    let e = generator_expr(seed, family, params, base)?;
    let name = match &e {
        Expr::Call(n, _) => n.as_str(),
        Expr::Num(_) => return Err(input("expected a generator name")),
    };
    let text = if GRAPHS.contains(&name) {
        let gs = eval_graphs(&e)?;
        io::write_graph(&gs[0])
    } else if ACTIONS.contains(&name) {
        let acts = eval_actions(&e)?;
        if name == "double-cover-chain" {
            io::write_chain(&acts)
        } else {
            io::write_action(&acts[0])
        }
    } else if COMPLEXES.contains(&name) {
        io::write_complex(&eval_complex(&e)?)
    } else {
        io::write_matrix(&eval_matrix(&e)?)
    };
    Ok(Outcome::Instance(text))
}
