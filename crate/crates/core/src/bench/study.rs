//! Convergence studies and timing sweeps.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use super::config::ExperimentConfig;
use super::report::{BenchRow, ConvergenceReport};
use crate::error::{Error, Result};
use crate::solver::{run, RunOutput, SchemeKind};

/// Worker count for `jobs` independent runs: `FRAQ_THREADS` if set, else one
/// thread per job.
pub fn thread_limit(jobs: usize) -> Result<usize> {
    let cap = match std::env::var("FRAQ_THREADS") {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::Usage(format!("FRAQ_THREADS must be a positive integer, got `{s}`")))?,
        Err(_) => jobs,
    };
    Ok(cap.min(jobs).max(1))
}

/// Maps `f` over `items` on up to `threads` scoped workers, keeping order.
pub fn parallel_map<T, R, F>(items: &[T], threads: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    if threads <= 1 || items.len() <= 1 {
        return items.iter().map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<R>>> = Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..threads.min(items.len()) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(item) = items.get(i) else { break };
                let r = f(item);
                slots.lock().expect("worker panicked")[i] = Some(r);
            });
        }
    });
    slots
        .into_inner()
        .expect("worker panicked")
        .into_iter()
        .map(|r| r.expect("every slot filled"))
        .collect()
}

#[derive(Debug, Clone, Copy)]
struct Job {
    scheme: SchemeKind,
    pair: (f64, f64),
    tau: f64,
}

/// Runs every configured scheme at every study τ and measures the error
/// against a reference run at `ref_tau`.
///
/// One reference is computed per (order pair, reference scheme) and shared
/// by all schemes that use it; the reference scheme defaults to the
/// classical stepper of each family.
pub fn convergence_study(cfg: &ExperimentConfig) -> Result<Vec<ConvergenceReport>> {
    cfg.validate_study()?;
    let kernels = cfg.kernels();
    let ref_of = |s: SchemeKind| cfg.ref_scheme.unwrap_or(s.classical());
    let mut ref_jobs: Vec<Job> = Vec::new();
    let mut jobs: Vec<Job> = Vec::new();
    for pair in cfg.alpha_pairs() {
        for &scheme in &cfg.schemes {
            let r = Job {
                scheme: ref_of(scheme),
                pair,
                tau: cfg.ref_tau,
            };
            if !ref_jobs.iter().any(|j| j.scheme == r.scheme && j.pair == pair) {
                ref_jobs.push(r);
            }
            jobs.extend(cfg.taus.iter().map(|&tau| Job { scheme, pair, tau }));
        }
    }
    let n_refs = ref_jobs.len();
    ref_jobs.extend(jobs);
    let all = ref_jobs;

    let threads = thread_limit(all.len())?;
    let outputs: Vec<Result<RunOutput>> = parallel_map(&all, threads, |job| {
        let spec = cfg.problem(job.pair.0, job.pair.1, cfg.steps_for(job.tau)?);
        run(&spec, job.scheme, &kernels)
    });
    let outputs = outputs.into_iter().collect::<Result<Vec<_>>>()?;
    let (refs, runs) = outputs.split_at(n_refs);
    let h = cfg.length / (cfg.grid_m + 1) as f64;

    let mut reports = Vec::new();
    let mut k = 0;
    for pair in cfg.alpha_pairs() {
        for &scheme in &cfg.schemes {
            let rs = ref_of(scheme);
            let ri = all[..n_refs]
                .iter()
                .position(|j| j.scheme == rs && j.pair == pair)
                .expect("reference scheduled");
            let reference = &refs[ri].field;
            let mut rows = Vec::with_capacity(cfg.taus.len());
            for &tau in &cfg.taus {
                let out = &runs[k];
                k += 1;
                let (e1, e2) = out.field.diff_norms(reference, h);
                rows.push((tau, e1, e2, out.seconds_setup + out.seconds_loop));
            }
            reports.push(ConvergenceReport::from_errors(scheme, pair, (rs, cfg.ref_tau), &rows)?);
        }
    }
    Ok(reports)
}

/// Times each scheme over the step counts in `n_list` at the first order
/// pair, one run at a time so the runs do not compete for cores.
pub fn timing_sweep(cfg: &ExperimentConfig) -> Result<Vec<BenchRow>> {
    let kernels = cfg.kernels();
    let (a1, a2) = cfg.alpha_pairs()[0];
    let mut rows = Vec::new();
    for &scheme in &cfg.schemes {
        for &n in &cfg.n_list {
            let out = run(&cfg.problem(a1, a2, n), scheme, &kernels)?;
            rows.push(BenchRow {
                scheme,
                n,
                seconds_loop: out.seconds_loop,
                seconds_setup: out.seconds_setup,
            });
        }
    }
    Ok(rows)
}
