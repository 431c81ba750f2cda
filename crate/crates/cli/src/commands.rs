use anfsat_core::analysis::{
    count_models, extremal_weight_solutions, ratio_f64, ratio_string, speedup_report,
    ExtremalWeight, SpeedupReport, WeightMode, DEFAULT_WITNESS_CAP,
};
use anfsat_core::generator::{generate_system, GenSpec};
use anfsat_core::implicants::ImplicantSet;
use anfsat_core::oracle::{bit_string, check_equivalence, expand_implicants, Equivalence, MAX_PACKED_VARS};
use anfsat_core::solver::SolveStats;
use anfsat_core::{boolean_solve, generate_implicants, AnfPoly, Formula, OrderPolicy, SolverConfig};
use num_bigint::BigUint;
use num_rational::BigRational;

use crate::document::{
    RatioDoc, ResultDocument, SignedTerm, SpeedupDoc, SpeedupRow, StatsDoc, Status, TimingDoc,
    WeightDoc, RESULT_FORMAT, SPEEDUP_FORMAT,
};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum Emit {
    Implicants,
    Count,
    Solutions,
    Minwt,
    Maxwt,
}

pub const DEFAULT_SOLUTION_LIMIT: u64 = 1_000_000;

#[derive(Clone, Debug)]
pub struct EmitOptions {
    pub emit: Vec<Emit>,
    /// Refuse to expand more than this many solutions unless `force`.
    pub solution_limit: u64,
    pub force: bool,
    pub witness_cap: usize,
}

impl Default for EmitOptions {
    fn default() -> Self {
        EmitOptions {
            emit: vec![Emit::Implicants],
            solution_limit: DEFAULT_SOLUTION_LIMIT,
            force: false,
            witness_cap: DEFAULT_WITNESS_CAP,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SolveOptions {
    pub config: SolverConfig,
    pub emit: EmitOptions,
    pub stats: bool,
    /// Processor counts for the speedup table; empty for none.
    pub procs: Vec<u64>,
}

fn weight_doc(w: ExtremalWeight) -> WeightDoc {
    WeightDoc {
        weight: w.weight,
        implicants: w.terms.iter().map(SignedTerm::from).collect(),
        witnesses: w.witnesses.iter().map(|a| bit_string(a)).collect(),
        truncated: w.truncated,
    }
}

fn build_document(
    set: &ImplicantSet,
    num_vars: u32,
    options: &EmitOptions,
) -> Result<ResultDocument, CliError> {
    let terms = set.terms();
    let status = if terms.is_empty() {
        Status::Unsat
    } else {
        Status::Sat
    };
    let mut doc = ResultDocument {
        format: RESULT_FORMAT.into(),
        status,
        num_vars,
        implicants: None,
        model_count: None,
        solutions: None,
        minwt: None,
        maxwt: None,
        stats: None,
        speedup: None,
    };
    let wants = |e: Emit| options.emit.contains(&e);
    if wants(Emit::Implicants) {
        doc.implicants = Some(terms.iter().map(SignedTerm::from).collect());
    }
    let count = if wants(Emit::Count) || wants(Emit::Solutions) {
        Some(count_models(terms, num_vars).map_err(|e| CliError::Input(e.to_string()))?)
    } else {
        None
    };
    if wants(Emit::Count) {
        doc.model_count = count.as_ref().map(BigUint::to_string);
    }
    if wants(Emit::Solutions) {
        let count = count.expect("computed above");
        if count > BigUint::from(options.solution_limit) && !options.force {
            return Err(CliError::Refused(format!(
                "{count} solutions exceed the expansion limit of {}; pass --force to expand anyway",
                options.solution_limit
            )));
        }
        if num_vars > MAX_PACKED_VARS {
            return Err(CliError::Refused(format!(
                "cannot expand solutions over more than {MAX_PACKED_VARS} variables"
            )));
        }
        let expanded = expand_implicants(terms, num_vars).map_err(|e| CliError::Refused(e.to_string()))?;
        let mut rows: Vec<String> = expanded.iter().map(|a| bit_string(&a)).collect();
        rows.sort();
        doc.solutions = Some(rows);
    }
    for (emit, mode) in [(Emit::Minwt, WeightMode::Min), (Emit::Maxwt, WeightMode::Max)] {
        if !wants(emit) || terms.is_empty() {
            continue;
        }
        let w = extremal_weight_solutions(terms, num_vars, mode, options.witness_cap)
            .map_err(|e| CliError::Input(e.to_string()))?;
        match mode {
            WeightMode::Min => doc.minwt = Some(weight_doc(w)),
            WeightMode::Max => doc.maxwt = Some(weight_doc(w)),
        }
    }
    Ok(doc)
}

fn millis(d: std::time::Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

pub fn stats_doc(stats: &SolveStats) -> StatsDoc {
    StatsDoc {
        segments_total: stats.segments_total,
        longest_chain: stats.longest_chain,
        pruned: stats.tasks_pruned,
        timing: Some(TimingDoc {
            wall_time_ms: millis(stats.wall_time),
            critical_path_ms: millis(stats.critical_path_time),
            busy_time_ms: millis(stats.busy_time()),
        }),
    }
}

fn ratio_doc(r: &BigRational) -> RatioDoc {
    RatioDoc {
        exact: ratio_string(r),
        approx: ratio_f64(r),
    }
}

pub fn speedup_doc(report: &SpeedupReport) -> SpeedupDoc {
    SpeedupDoc {
        format: SPEEDUP_FORMAT.into(),
        segments_total: report.segments_total,
        longest_chain: report.longest_chain,
        max_speedup: ratio_doc(&report.max_speedup),
        parallel_fraction: ratio_doc(&report.parallel_fraction),
        critical_speedup: ratio_doc(&report.critical_speedup),
        table: report
            .table
            .iter()
            .map(|(p, s)| SpeedupRow {
                procs: *p,
                speedup: ratio_doc(s),
            })
            .collect(),
    }
}

pub fn solve(formula: &Formula, options: &SolveOptions) -> Result<ResultDocument, CliError> {
    let result = boolean_solve(formula, &options.config);
    let mut doc = build_document(&result.implicants, formula.num_vars(), &options.emit)?;
    if options.stats {
        doc.stats = Some(stats_doc(&result.stats));
    }
    if !options.procs.is_empty() {
        let report = speedup_report(
            result.stats.segments_total,
            result.stats.longest_chain,
            &options.procs,
        )
        .map_err(|e| CliError::Input(e.to_string()))?;
        doc.speedup = Some(speedup_doc(&report));
    }
    Ok(doc)
}

pub fn implicants(
    f: &AnfPoly,
    num_vars: u32,
    order: OrderPolicy,
    options: &EmitOptions,
) -> Result<ResultDocument, CliError> {
    let set = generate_implicants(f, order);
    build_document(&set, num_vars, options)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub equivalent: bool,
    pub message: String,
}

/// Checks `terms` (or a fresh solve when `None`) against exhaustive evaluation.
pub fn verify(
    formula: &Formula,
    result: Option<&ResultDocument>,
    config: &SolverConfig,
    limit: u32,
) -> Result<Verdict, CliError> {
    let terms = match result {
        Some(doc) => doc.terms()?,
        None => boolean_solve(formula, config).implicants.into_terms(),
    };
    let outcome = check_equivalence(formula, &terms, limit).map_err(|e| CliError::Refused(e.to_string()))?;
    let message = match &outcome {
        Equivalence::Equivalent => format!(
            "equivalent: {} implicant(s) cover exactly the solutions",
            terms.len()
        ),
        Equivalence::Missing(a) => format!(
            "not equivalent: {} satisfies every factor but no implicant covers it",
            bit_string(a)
        ),
        Equivalence::Spurious(a) => format!(
            "not equivalent: {} is covered by an implicant but violates a factor",
            bit_string(a)
        ),
    };
    Ok(Verdict {
        equivalent: outcome.holds(),
        message,
    })
}

pub fn gen(spec: &GenSpec) -> Result<Formula, CliError> {
    generate_system(spec).map_err(|e| CliError::Input(e.to_string()))
}

pub fn analyze(n: u64, n_seq: u64, procs: &[u64]) -> Result<SpeedupDoc, CliError> {
    speedup_report(n, n_seq, procs)
        .map(|r| speedup_doc(&r))
        .map_err(|e| CliError::Input(e.to_string()))
}

/// Human-readable speedup report.
pub fn render_speedup(doc: &SpeedupDoc) -> String {
    let mut out = String::new();
    out.push_str(&format!("segments N        {}\n", doc.segments_total));
    out.push_str(&format!("longest chain     {}\n", doc.longest_chain));
    out.push_str(&format!(
        "max speedup S     {} (~{:.4})\n",
        doc.max_speedup.exact, doc.max_speedup.approx
    ));
    out.push_str(&format!(
        "parallel fraction {} (~{:.4})\n",
        doc.parallel_fraction.exact, doc.parallel_fraction.approx
    ));
    out.push_str(&format!(
        "critical speedup  {} (~{:.4})\n",
        doc.critical_speedup.exact, doc.critical_speedup.approx
    ));
    if !doc.table.is_empty() {
        out.push_str("\n       P  S(P)\n");
        for row in &doc.table {
            out.push_str(&format!(
                "{:>8}  {} (~{:.4})\n",
                row.procs, row.speedup.exact, row.speedup.approx
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn system() -> Formula {
        Formula::parse_factors(&[
            "[[1],[2],[2,3]]",
            "[[2],[3],[3,4]]",
            "[[3],[4],[4,1]]",
            "[[4],[1],[1,2]]",
        ])
        .unwrap()
    }

    fn all_emits() -> EmitOptions {
        EmitOptions {
            emit: vec![Emit::Implicants, Emit::Count, Emit::Solutions, Emit::Minwt, Emit::Maxwt],
            ..EmitOptions::default()
        }
    }

    #[test]
    fn solve_document() {
        let options = SolveOptions {
            emit: all_emits(),
            stats: true,
            procs: vec![1, 2],
            ..SolveOptions::default()
        };
        let doc = solve(&system(), &options).unwrap();
        assert_eq!(doc.status, Status::Sat);
        assert_eq!(
            doc.implicants.as_ref().unwrap(),
            &vec![
                SignedTerm(vec![-1, 2, -3, 4]),
                SignedTerm(vec![1, -2, 3, -4]),
                SignedTerm(vec![1, 2, 3, 4]),
            ]
        );
        assert_eq!(doc.model_count.as_deref(), Some("3"));
        assert_eq!(doc.solutions.as_ref().unwrap(), &["0101", "1010", "1111"]);
        let minwt = doc.minwt.as_ref().unwrap();
        assert_eq!((minwt.weight, minwt.witnesses.clone()), (2, vec!["0101".into(), "1010".into()]));
        assert_eq!(doc.maxwt.as_ref().unwrap().weight, 4);
        let stats = doc.stats.as_ref().unwrap();
        assert_eq!((stats.segments_total, stats.longest_chain, stats.pruned), (4, 2, 1));
        let speedup = doc.speedup.as_ref().unwrap();
        assert_eq!(speedup.max_speedup.exact, "2");
        assert_eq!(speedup.table[0].speedup.exact, "1");
        assert_eq!(speedup.table[1].speedup.exact, "4/3");
    }

    #[test]
    fn unsat_document() {
        let f = Formula::parse_factors(&["[[1]]", "[]"]).unwrap();
        let doc = solve(&f, &SolveOptions { emit: all_emits(), ..SolveOptions::default() }).unwrap();
        assert_eq!(doc.status, Status::Unsat);
        assert!(doc.implicants.unwrap().is_empty());
        assert_eq!(doc.model_count.as_deref(), Some("0"));
        assert!(doc.minwt.is_none() && doc.maxwt.is_none());
    }

    #[test]
    fn expansion_guard() {
        let f = Formula::new(vec![AnfPoly::one()], 30);
        let options = SolveOptions {
            emit: EmitOptions {
                emit: vec![Emit::Solutions],
                ..EmitOptions::default()
            },
            ..SolveOptions::default()
        };
        assert!(matches!(solve(&f, &options), Err(CliError::Refused(_))));

        let small = Formula::new(vec![AnfPoly::one()], 5);
        let mut options = options;
        options.emit.solution_limit = 10;
        assert!(matches!(solve(&small, &options), Err(CliError::Refused(_))));
        options.emit.force = true;
        assert_eq!(solve(&small, &options).unwrap().solutions.unwrap().len(), 32);
    }

    #[test]
    fn implicants_of_constants() {
        let options = EmitOptions {
            emit: vec![Emit::Implicants, Emit::Count],
            ..EmitOptions::default()
        };
        let one = implicants(&AnfPoly::one(), 6, OrderPolicy::Index, &options).unwrap();
        assert_eq!(one.implicants.unwrap(), vec![SignedTerm(vec![])]);
        assert_eq!(one.model_count.as_deref(), Some("64"));
        let zero = implicants(&AnfPoly::zero(), 6, OrderPolicy::Index, &options).unwrap();
        assert_eq!(zero.status, Status::Unsat);
    }

    #[test]
    fn verify_verdicts() {
        let cfg = SolverConfig::default();
        assert!(verify(&system(), None, &cfg, 24).unwrap().equivalent);
        let solved = solve(&system(), &SolveOptions::default()).unwrap();
        assert!(verify(&system(), Some(&solved), &cfg, 24).unwrap().equivalent);

        let mut tampered = solved.clone();
        tampered.implicants = Some(Vec::new());
        let v = verify(&system(), Some(&tampered), &cfg, 24).unwrap();
        assert!(!v.equivalent);
        assert!(v.message.contains("1010"), "{}", v.message);

        let wide = Formula::new(vec![AnfPoly::one()], 30);
        assert!(matches!(verify(&wide, None, &cfg, 24), Err(CliError::Refused(_))));

        let mut broken = solved;
        broken.implicants = None;
        assert!(matches!(verify(&system(), Some(&broken), &cfg, 24), Err(CliError::Input(_))));
    }

    #[test]
    fn analyze_report() {
        let doc = analyze(100, 10, &[1, 10]).unwrap();
        assert_eq!(doc.table[1].speedup.exact, "100/19");
        assert_eq!(doc.parallel_fraction.exact, "9/10");
        assert_eq!(doc.critical_speedup.exact, "100/19");
        let text = render_speedup(&doc);
        assert!(text.contains("100/19"));
        assert!(analyze(5, 10, &[1]).is_err());
    }
}
