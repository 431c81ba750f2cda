//! Pivot/cofactor solver for `F = f_1 * ... * f_m = 1`.
//!
//! Every unit of work is a [`SolveTask`]: a prefix term (the product of the
//! implicants chosen so far) and the formula already divided by that prefix.
//! Running a task is one *segment*: choose a pivot factor, expand it into
//! orthogonal implicants, divide the other factors by each implicant, and
//! either emit a solution, drop the branch on a contradiction, or queue a
//! child task. Tasks never share mutable state, so they can run on any
//! number of workers; the canonical output and the segment counts do not
//! depend on the schedule.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::anf::{parse_anf, AnfError, AnfPoly, Term, TermProduct, Var};
use crate::implicants::{generate_implicants, ImplicantSet, OrderPolicy};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("cannot choose a pivot from an empty factor list")]
    NoFactors,
    #[error("factor {index}: {source}")]
    Factor { index: usize, source: AnfError },
}

/// An ordered list of factors whose product must equal 1.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Formula {
    factors: Vec<AnfPoly>,
    num_vars: u32,
}

impl Formula {
    /// `num_vars` is raised to cover every variable the factors mention.
    pub fn new(factors: Vec<AnfPoly>, num_vars: u32) -> Self {
        let num_vars = factors
            .iter()
            .map(AnfPoly::num_vars)
            .fold(num_vars, u32::max);
        let factors = factors
            .into_iter()
            .map(|f| f.with_num_vars(num_vars))
            .collect();
        Formula { factors, num_vars }
    }

    /// Parses factors in array-of-arrays notation; `num_vars` is the largest
    /// index mentioned.
    pub fn parse_factors(factors: &[&str]) -> Result<Self, SolveError> {
        let parsed = factors
            .iter()
            .enumerate()
            .map(|(index, s)| parse_anf(s).map_err(|source| SolveError::Factor { index, source }))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Formula::new(parsed, 0))
    }

    pub fn factors(&self) -> &[AnfPoly] {
        &self.factors
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Variables mentioned by some factor, ascending.
    pub fn support(&self) -> Vec<Var> {
        let mut vars: Vec<Var> = self.factors.iter().flat_map(|f| f.support()).collect();
        vars.sort_unstable();
        vars.dedup();
        vars
    }

    fn without(&self, index: usize) -> Formula {
        let mut factors = self.factors.clone();
        factors.remove(index);
        Formula {
            factors,
            num_vars: self.num_vars,
        }
    }
}

/// Outcome of dividing a formula by a term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reduction {
    /// Remaining non-trivial factors; may be empty when everything reduced to 1.
    Reduced(Formula),
    Contradiction,
}

/// Divides every factor by `t`, drops factors that became 1 and reports a
/// contradiction as soon as one becomes 0.
pub fn reduce_formula(formula: &Formula, t: &Term) -> Reduction {
    let mut factors = Vec::with_capacity(formula.factors.len());
    for f in &formula.factors {
        let q = f.cofactor(t);
        if q.is_zero() {
            return Reduction::Contradiction;
        }
        if !q.is_one() {
            factors.push(q);
        }
    }
    Reduction::Reduced(Formula {
        factors,
        num_vars: formula.num_vars,
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum PivotPolicy {
    /// Smallest support; ties by lowest index.
    #[default]
    MinVars,
    First,
    /// Fewest monomials; ties by lowest index.
    MinTerms,
}

pub fn choose_pivot(formula: &Formula, policy: PivotPolicy) -> Result<usize, SolveError> {
    if formula.factors.is_empty() {
        return Err(SolveError::NoFactors);
    }
    let key = |f: &AnfPoly| match policy {
        PivotPolicy::MinVars => f.support().len(),
        PivotPolicy::MinTerms => f.num_monomials(),
        PivotPolicy::First => 0,
    };
    // min_by_key keeps the first of equal minima
    Ok(formula
        .factors
        .iter()
        .enumerate()
        .min_by_key(|(_, f)| key(f))
        .map(|(i, _)| i)
        .expect("non-empty"))
}

/// Canonically sorts solver output.
pub fn dedup_and_sort(results: Vec<Term>, ambient_vars: Vec<Var>) -> ImplicantSet {
    ImplicantSet::new(results, ambient_vars)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub pivot: PivotPolicy,
    pub order: OrderPolicy,
    /// Worker threads; 0 picks the available parallelism, 1 runs the
    /// sequential worklist on the calling thread.
    pub workers: usize,
    /// Stop after the first solution (decision mode).
    pub first_solution: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            pivot: PivotPolicy::MinVars,
            order: OrderPolicy::Index,
            workers: 1,
            first_solution: false,
        }
    }
}

impl SolverConfig {
    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn effective_workers(&self) -> usize {
        match self.workers {
            0 => std::thread::available_parallelism().map_or(1, |n| n.get()),
            n => n,
        }
    }
}

/// One thread segment's input.
#[derive(Clone, Debug)]
pub struct SolveTask {
    pub prefix: Term,
    /// Already divided by `prefix`. Below the root no factor is constant.
    pub formula: Formula,
    pub depth: u32,
    path_time: Duration,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Number of segments executed, `N`.
    pub segments_total: u64,
    /// Most segments on any root-to-leaf path, `N_seq`.
    pub longest_chain: u64,
    /// Branches dropped because some factor divided to 0.
    pub tasks_pruned: u64,
    pub wall_time: Duration,
    /// Largest summed segment time along one root-to-leaf path.
    pub critical_path_time: Duration,
    pub segment_times: Vec<Duration>,
}

impl SolveStats {
    /// Total time spent inside segments, over all workers.
    pub fn busy_time(&self) -> Duration {
        self.segment_times.iter().sum()
    }
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub implicants: ImplicantSet,
    pub stats: SolveStats,
}

impl SolveResult {
    pub fn is_sat(&self) -> bool {
        !self.implicants.is_empty()
    }
}

struct Segment {
    solutions: Vec<Term>,
    children: Vec<SolveTask>,
    pruned: u64,
}

fn run_segment(task: &SolveTask, config: &SolverConfig) -> Segment {
    let mut seg = Segment {
        solutions: Vec::new(),
        children: Vec::new(),
        pruned: 0,
    };
    let normalized;
    let formula = if task.depth == 0 {
        // the root still carries the caller's constant factors
        match reduce_formula(&task.formula, &Term::tautology()) {
            Reduction::Contradiction => {
                seg.pruned = 1;
                return seg;
            }
            Reduction::Reduced(g) => {
                normalized = g;
                &normalized
            }
        }
    } else {
        &task.formula
    };
    if formula.is_empty() {
        seg.solutions.push(task.prefix.clone());
        return seg;
    }
    let pivot_index = choose_pivot(formula, config.pivot).expect("non-empty formula");
    let pivot = &formula.factors[pivot_index];
    let implicants = generate_implicants(pivot, config.order);
    let extend = |t: &Term| match task.prefix.product(t) {
        TermProduct::Term(p) => p,
        TermProduct::Contradiction => unreachable!("pivot support is disjoint from the prefix"),
    };

    if formula.factors.len() == 1 {
        seg.solutions.extend(implicants.terms().iter().map(extend));
        return seg;
    }
    let rest = formula.without(pivot_index);
    for t in implicants.terms() {
        match reduce_formula(&rest, t) {
            Reduction::Contradiction => seg.pruned += 1,
            Reduction::Reduced(g) if g.is_empty() => seg.solutions.push(extend(t)),
            Reduction::Reduced(g) => seg.children.push(SolveTask {
                prefix: extend(t),
                formula: g,
                depth: task.depth + 1,
                path_time: Duration::ZERO,
            }),
        }
    }
    seg
}

#[derive(Default)]
struct Collector {
    solutions: Mutex<Vec<Term>>,
    segment_times: Mutex<Vec<Duration>>,
    segments: AtomicU64,
    longest: AtomicU64,
    pruned: AtomicU64,
    critical_nanos: AtomicU64,
    stop: AtomicBool,
}

impl Collector {
    /// Runs one task and returns its children with their accumulated path time.
    fn process(&self, task: SolveTask, config: &SolverConfig) -> Vec<SolveTask> {
        if self.stop.load(Ordering::Relaxed) {
            return Vec::new();
        }
        let start = Instant::now();
        let mut seg = run_segment(&task, config);
        let elapsed = start.elapsed();
        let path_time = task.path_time + elapsed;

        self.segments.fetch_add(1, Ordering::Relaxed);
        self.longest
            .fetch_max(u64::from(task.depth) + 1, Ordering::Relaxed);
        self.pruned.fetch_add(seg.pruned, Ordering::Relaxed);
        self.segment_times.lock().unwrap().push(elapsed);
        if seg.children.is_empty() {
            let nanos = u64::try_from(path_time.as_nanos()).unwrap_or(u64::MAX);
            self.critical_nanos.fetch_max(nanos, Ordering::Relaxed);
        }
        if !seg.solutions.is_empty() {
            self.solutions.lock().unwrap().append(&mut seg.solutions);
            if config.first_solution {
                self.stop.store(true, Ordering::Relaxed);
                return Vec::new();
            }
        }
        for child in &mut seg.children {
            child.path_time = path_time;
        }
        seg.children
    }
}

/// Computes a complete orthogonal implicant set of the product of the
/// factors. An unsatisfiable formula yields the empty set; a formula whose
/// factors are all 1 yields the tautology term.
pub fn boolean_solve(formula: &Formula, config: &SolverConfig) -> SolveResult {
    let started = Instant::now();
    let collector = Collector::default();

    let root = SolveTask {
        prefix: Term::tautology(),
        formula: formula.clone(),
        depth: 0,
        path_time: Duration::ZERO,
    };
    match config.effective_workers() {
        1 => {
            let mut stack = vec![root];
            while let Some(task) = stack.pop() {
                let mut children = collector.process(task, config);
                children.reverse();
                stack.append(&mut children);
            }
        }
        workers => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .expect("failed to start worker pool");
            pool.scope(|scope| spawn(scope, &collector, config, root));
        }
    }

    let mut solutions = collector.solutions.into_inner().unwrap();
    if config.first_solution {
        solutions.sort_unstable();
        solutions.truncate(1);
    }
    let stats = SolveStats {
        segments_total: collector.segments.into_inner(),
        longest_chain: collector.longest.into_inner(),
        tasks_pruned: collector.pruned.into_inner(),
        wall_time: started.elapsed(),
        critical_path_time: Duration::from_nanos(collector.critical_nanos.into_inner()),
        segment_times: collector.segment_times.into_inner().unwrap(),
    };
    SolveResult {
        implicants: dedup_and_sort(solutions, formula.support()),
        stats,
    }
}

fn spawn<'s>(
    scope: &rayon::Scope<'s>,
    collector: &'s Collector,
    config: &'s SolverConfig,
    task: SolveTask,
) {
    scope.spawn(move |scope| {
        for child in collector.process(task, config) {
            spawn(scope, collector, config, child);
        }
    });
}
