//! One function per subcommand; each writes its whole report to `out`.

use std::collections::BTreeMap;
use std::io::Write;

use serde_json::{json, Value};

use word_measures::characters::{dimension_poly, stable_inner, stable_irreducible, Basis};
use word_measures::morphisms::{PartitionSearch, QuotientLattice};
use word_measures::oracle::{exact_expectation, mc_expectation, ExactBudget};
use word_measures::schreier::{
    adjacency_mu, bound_experiment, build_random_schreier, hashimoto_spectrum, ramanujan_bound, trace_identity_check,
};
use word_measures::wordstats::{decide_conjugate, expectation_of, powers_morphism, primitivity};
use word_measures::{ClassFunction, CyclicWord, IntPartition, MultiCoreGraph, OracleValue, Word};

use crate::render::{laurent, parse_list, parse_range, rational_fn, write_target};
use crate::{
    CliResult, ConjArgs, DecompArgs, ExpectArgs, GraphArgs, InnerArgs, IrreducibleArgs, OracleArgs, SchreierArgs,
    StatArgs, WordArgs,
};

/// Largest non-backtracking matrix handed to the dense eigensolver.
const MAX_DIRECTED_EDGES: usize = 6000;
/// Relative tolerance when matching the non-backtracking spectrum.
const SPECTRUM_TOLERANCE: f64 = 1e-6;
/// Most cyclically reduced words enumerated by a trace check.
const MAX_TRACE_WORDS: usize = 5_000_000;

pub fn expect(out: &mut impl Write, rank: usize, a: &ExpectArgs) -> CliResult {
    let w = Word::parse(&a.word, rank)?;
    let f = ClassFunction::parse(&a.stat)?;
    let range = a.eval.as_deref().map(parse_range).transpose()?;
    let e = expectation_of(&w, &f, &PartitionSearch::default())?;
    let scaled = e.scaled_rational();
    let values: Vec<(u64, String)> = range
        .into_iter()
        .flatten()
        .map(|n| (n, e.value(n).to_string()))
        .collect();
    let series = a.laurent.map(|k| e.laurent(k));

    if a.json {
        let mut doc = json!({
            "word": w.to_string(),
            "rank": rank,
            "stat": e.stat.to_string(),
            "text": e.to_string(),
            "rational": rational_fn(&scaled, &e.denominator),
            "values": values.iter().map(|(n, v)| json!({"N": n, "value": v})).collect::<Vec<_>>(),
            "monomials": e.monomials.iter().map(|(c, r)| json!({
                "alpha": r.alpha,
                "coefficient": c.to_string(),
                "pi": r.pi,
                "crit": r.crit_count,
                "e_unif": r.e_unif.to_string(),
            })).collect::<Vec<_>>(),
        });
        if let Some(s) = &series {
            doc["laurent"] = laurent(s);
        }
        writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("values serialise"))?;
        return Ok(());
    }

    writeln!(out, "E_w[f] for w = {w}, f = {}", e.stat)?;
    writeln!(out, "  = {e}")?;
    writeln!(out, "  (closed form valid for N >= {})", scaled.n_min())?;
    for (n, v) in &values {
        writeln!(out, "N={n}: {v}")?;
    }
    if let Some(s) = &series {
        writeln!(out, "Laurent: {s}")?;
    }
    Ok(())
}

pub fn pirank(out: &mut impl Write, rank: usize, a: &WordArgs) -> CliResult {
    let w = Word::parse(&a.word, rank)?;
    let report = primitivity(&w, &PartitionSearch::default())?;
    match report.pi {
        Some(pi) => writeln!(out, "pi = {pi}")?,
        None => writeln!(out, "pi = inf")?,
    }
    writeln!(out, "|Crit| = {}", report.crit.len())?;
    for (i, d) in report.crit.iter().enumerate() {
        let base = d.first.vertex_map()[0];
        let basis: Vec<String> = d.middle().pi1_basis(base)?.iter().map(|g| g.to_string()).collect();
        writeln!(out, "crit[{i}] = <{}>", basis.join(", "))?;
    }
    Ok(())
}

pub fn inner(out: &mut impl Write, a: &InnerArgs) -> CliResult {
    let f = ClassFunction::parse(&a.f)?;
    let g = ClassFunction::parse(&a.g)?;
    writeln!(out, "{}", stable_inner(&f, &g))?;
    Ok(())
}

pub fn irreducible(out: &mut impl Write, a: &IrreducibleArgs) -> CliResult {
    let lambda = IntPartition::parse(&a.lambda)?;
    let chi = stable_irreducible(&lambda);
    writeln!(out, "lambda = {lambda}")?;
    writeln!(out, "xi basis: {chi}")?;
    writeln!(out, "a basis: {}", chi.to_basis(Basis::A))?;
    writeln!(out, "dimension: {}", dimension_poly(&lambda))?;
    Ok(())
}

pub fn unif(out: &mut impl Write, a: &StatArgs) -> CliResult {
    let f = ClassFunction::parse(&a.stat)?;
    writeln!(out, "{}", stable_inner(&f, &ClassFunction::one()))?;
    Ok(())
}

pub fn oracle(out: &mut impl Write, rank: usize, a: &OracleArgs) -> CliResult {
    let w = Word::parse(&a.word, rank)?;
    let f = ClassFunction::parse(&a.stat)?;
    let result = match a.mc {
        Some(samples) => mc_expectation(&w, &f, a.n, samples, a.seed)?,
        None => {
            let mut budget = ExactBudget::default();
            if let Some(max) = a.budget {
                budget.max_tuples = max;
            }
            exact_expectation(&w, &f, a.n, &budget)?
        }
    };
    let (mode, value, std_error) = match &result.value {
        OracleValue::Exact(q) => ("exact", q.to_string(), String::new()),
        OracleValue::Estimate { mean, std_error } => ("mc", mean.to_string(), std_error.to_string()),
    };
    let mut csv = csv::Writer::from_writer(out);
    csv.write_record(["word", "stat", "N", "mode", "samples", "seed", "value", "std_error"])?;
    csv.write_record([
        w.to_string(),
        f.to_string(),
        result.n.to_string(),
        mode.to_string(),
        result.samples.to_string(),
        result.seed.map(|s| s.to_string()).unwrap_or_default(),
        value,
        std_error,
    ])?;
    csv.flush()?;
    Ok(())
}

pub fn conj(out: &mut impl Write, rank: usize, a: &ConjArgs) -> CliResult {
    let u = Word::parse(&a.u, rank)?;
    let v = Word::parse(&a.v, rank)?;
    let (conjugate, ev) = decide_conjugate(&u, &v)?;
    writeln!(out, "conjugate: {}", if conjugate { "yes" } else { "no" })?;
    writeln!(out, "u = ({})^{}", ev.root_u, ev.exponent_u)?;
    writeln!(out, "v = ({})^{}", ev.root_v, ev.exponent_v)?;
    writeln!(
        out,
        "one-cycle quotients: {} ({} aligned), two-cycle quotients: {}",
        ev.one_component, ev.one_component_aligned, ev.two_components
    )?;
    Ok(())
}

fn powers_or_cycle(rank: usize, word: &str, powers: Option<&str>) -> Result<(CyclicWord, MultiCoreGraph), crate::CliError> {
    let w = CyclicWord::parse(word, rank)?;
    let g = match powers {
        Some(p) => MultiCoreGraph::powers(&w, &parse_list(p)?)?,
        None => MultiCoreGraph::cycle(&w),
    };
    Ok((w, g))
}

pub fn graph(out: &mut impl Write, rank: usize, a: &GraphArgs) -> CliResult {
    let (w, g) = powers_or_cycle(rank, &a.word, a.powers.as_deref())?;
    let inv = g.invariants();
    writeln!(out, "word: {w}")?;
    writeln!(out, "vertices: {}", g.num_vertices())?;
    writeln!(out, "edges: {}", g.num_edges())?;
    writeln!(out, "chi: {}", inv.chi)?;
    writeln!(out, "components: {}", inv.components)?;
    if let Some(path) = &a.dot {
        write_target(out, path, &g.to_dot(None))?;
    }
    Ok(())
}

pub fn decomp(out: &mut impl Write, rank: usize, a: &DecompArgs) -> CliResult {
    let w = CyclicWord::parse(&a.word, rank)?;
    let alpha = parse_list(&a.powers)?;
    let eta = powers_morphism(&w, &alpha)?;
    let lattice = QuotientLattice::new(&eta.image().surjection, &PartitionSearch::default())?;
    let algebraic = lattice.algebraic_from_bottom();
    let mut by_chi: BTreeMap<i64, (usize, usize)> = BTreeMap::new();
    for i in 0..lattice.len() {
        let entry = by_chi.entry(lattice.chi(i)).or_default();
        entry.0 += 1;
        entry.1 += usize::from(algebraic[i]);
    }
    writeln!(out, "decompositions: {}", lattice.len())?;
    writeln!(out, "algebraic first leg: {}", algebraic.iter().filter(|&&b| b).count())?;
    for (chi, (count, alg)) in by_chi.iter().rev() {
        writeln!(out, "chi {chi}: {count} ({alg} algebraic)")?;
    }
    if a.list {
        for i in 0..lattice.len() {
            let blocks: Vec<String> = lattice
                .element(i)
                .partition
                .members()
                .iter()
                .map(|b| format!("{{{}}}", b.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")))
                .collect();
            writeln!(
                out,
                "[{i}] chi={} algebraic={} {}",
                lattice.chi(i),
                algebraic[i],
                blocks.join(" ")
            )?;
        }
    }
    Ok(())
}

pub fn schreier(out: &mut impl Write, a: &SchreierArgs) -> CliResult {
    if a.r == 0 || a.s == 0 || a.s > a.n {
        return Err(crate::CliError::Usage("need r >= 1 and 1 <= s <= N".into()));
    }
    let trials = bound_experiment(a.r, a.s, &[a.n], a.trials, a.seed, a.max_vertices)?;
    let d = 2 * a.r;
    let vertices: usize = (0..a.s).map(|i| a.n - i).product();
    let below = trials.iter().filter(|t| t.below).count();
    let mut doc = json!({
        "r": a.r,
        "s": a.s,
        "N": a.n,
        "degree": d,
        "vertices": vertices,
        "seed": a.seed,
        "bound": ramanujan_bound(d, a.s),
        "ramanujan": 2.0 * ((d - 1) as f64).sqrt(),
        "trials": trials.iter().map(|t| json!({"trial": t.trial, "seed": t.seed, "mu": t.mu, "below": t.below})).collect::<Vec<_>>(),
        "below": below,
    });

    let mut traces = Vec::new();
    let mut nb_reports = Vec::new();
    let mut rows: Vec<[String; 5]> = Vec::new();
    if a.trace.is_some() || a.spectrum.is_some() || a.hashimoto {
        for k in 0..a.trials {
            let g = build_random_schreier(a.r, a.s, a.n, a.seed ^ k, a.max_vertices)?;
            if let Some(t) = a.trace {
                let check = trace_identity_check(&g, t, MAX_TRACE_WORDS)?;
                traces.push(json!({
                    "trial": k,
                    "t": t,
                    "lhs": check.lhs.to_string(),
                    "rhs": check.rhs.to_string(),
                    "equal": check.equal,
                }));
            }
            if a.spectrum.is_some() {
                for (i, x) in adjacency_mu(&g)?.eigenvalues.iter().enumerate() {
                    rows.push([k.to_string(), "adjacency".into(), i.to_string(), x.to_string(), "0".into()]);
                }
            }
            if a.hashimoto {
                let report = hashimoto_spectrum(&g, MAX_DIRECTED_EDGES, SPECTRUM_TOLERANCE)?;
                nb_reports.push(json!({
                    "trial": k,
                    "nu": report.nu,
                    "plus_minus_one": report.plus_minus_one,
                    "max_deviation": report.max_deviation,
                    "ihara_bass": report.ihara_bass,
                }));
                for (i, z) in report.eigenvalues.iter().enumerate() {
                    rows.push([k.to_string(), "hashimoto".into(), i.to_string(), z.re.to_string(), z.im.to_string()]);
                }
            }
        }
    }
    if a.trace.is_some() {
        doc["trace"] = Value::Array(traces);
    }
    if a.hashimoto {
        doc["hashimoto"] = Value::Array(nb_reports);
    }
    if let Some(path) = &a.spectrum {
        let mut csv = csv::Writer::from_writer(Vec::new());
        csv.write_record(["trial", "matrix", "index", "re", "im"])?;
        for row in &rows {
            csv.write_record(row)?;
        }
        let bytes = csv.into_inner().map_err(|e| e.into_error())?;
        write_target(out, path, &String::from_utf8(bytes).expect("csv output is utf-8"))?;
    }
    writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("values serialise"))?;
    Ok(())
}
