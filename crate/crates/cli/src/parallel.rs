//! Thread-pool drivers for the enumeration engines and Monte Carlo plans.
//!
//! Results never depend on the worker count: counts are sums, point sets
//! are unions, and Monte Carlo shards are combined in shard order.

use std::time::Instant;

use chordal_core::densities::montecarlo::{Estimate, McPlan};
use chordal_core::enumerate::{
    ClassCounts, CountRecord, DirectEngine, Engine, EngineKind, PairsEngine, PointStore, Tally,
};
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

use crate::{CliError, Result};

pub struct Runner {
    pool: ThreadPool,
}

impl Runner {
    pub fn new(workers: usize) -> Result<Self> {
        let pool = ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| CliError::Failure(format!("cannot start worker pool: {e}")))?;
        Ok(Runner { pool })
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }

    /// Streams every point of `engine` through a class tally.
    pub fn tally<E: Engine>(&self, engine: &E, bound: u64) -> Result<ClassCounts> {
        self.pool.install(|| {
            (0..engine.task_count())
                .into_par_iter()
                .map(|t| {
                    let mut tally = Tally::new(bound);
                    engine.run_task(t, &mut tally)?;
                    Ok(tally.counts())
                })
                .try_reduce(ClassCounts::default, |mut a, b| {
                    a.merge(&b);
                    Ok(a)
                })
        })
    }

    /// Collects every point of `engine`, keeping track of repeats.
    pub fn collect<E: Engine>(&self, engine: &E, bound: u64) -> Result<PointStore> {
        self.pool.install(|| {
            (0..engine.task_count())
                .into_par_iter()
                .map(|t| {
                    let mut store = PointStore::new(bound);
                    engine.run_task(t, &mut store)?;
                    Ok(store)
                })
                .try_reduce(
                    || PointStore::new(bound),
                    |mut a, b| {
                        a.merge(b);
                        Ok(a)
                    },
                )
        })
    }

    /// Counts at one bound with the chosen engine, timing the run.
    pub fn count(&self, bound: u64, engine: EngineKind, slack: u32, direct_cap: u64) -> Result<[CountRecord; 4]> {
        let start = Instant::now();
        let counts = match engine {
            EngineKind::Pairs => self.tally(&PairsEngine::new(bound, slack)?, bound)?,
            EngineKind::Direct => self.collect(&DirectEngine::new(bound, direct_cap)?, bound)?.counts()?,
        };
        let elapsed = start.elapsed().as_millis() as u64;
        Ok(counts.records(bound, engine, elapsed))
    }

    pub fn estimate(&self, plan: &McPlan) -> Result<Estimate> {
        let shards = self.pool.install(|| {
            (0..plan.shard_count()).into_par_iter().map(|s| plan.run_shard(s)).collect::<Result<Vec<_>, _>>()
        })?;
        Ok(plan.finish(&shards)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use chordal_core::densities::montecarlo::Integrand;
    use chordal_core::enumerate::{enumerate_direct, DEFAULT_DIRECT_CAP, DEFAULT_SLACK};

    #[test]
    fn worker_count_does_not_change_results() {
        let one = Runner::new(1).unwrap();
        let three = Runner::new(3).unwrap();
        let e = PairsEngine::new(2000, DEFAULT_SLACK).unwrap();
        assert_eq!(one.tally(&e, 2000).unwrap(), three.tally(&e, 2000).unwrap());
        let plan = McPlan::new(Integrand::VolMinus, 20_000, 4).unwrap();
        assert_eq!(one.estimate(&plan).unwrap(), three.estimate(&plan).unwrap());
        assert_eq!(one.estimate(&plan).unwrap(), plan.run().unwrap());
    }

    #[test]
    fn parallel_direct_matches_sequential() {
        let r = Runner::new(2).unwrap();
        let par = r.collect(&DirectEngine::new(500, DEFAULT_DIRECT_CAP).unwrap(), 500).unwrap();
        let seq = enumerate_direct(500, DEFAULT_DIRECT_CAP).unwrap();
        assert_eq!(par.iter().collect::<Vec<_>>(), seq.iter().collect::<Vec<_>>());
        assert_eq!(par.repeats(), seq.repeats());
    }
}
