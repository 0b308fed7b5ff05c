//! Timing table over filter configurations.

use std::io::Write;

use orbits_core::filters::{answer_query, Algorithm, FilterRequest};
use orbits_core::{EncoderOptions, EncodingSpec, FilterError, PrioritizedInstance};
use orbits_sat::SolverConfig;
use rayon::prelude::*;
use serde::Serialize;

use crate::io::repair_label;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub semantics: String,
    pub repair: String,
    pub encoding: String,
    pub algorithm: String,
    pub preprocess_ms: f64,
    pub filter_ms: f64,
    pub result_count: usize,
    pub complete: bool,
}

/// Averages `repeat` runs of each cell. Cells run in parallel when `jobs`
/// exceeds one, which makes the timings noisier.
pub fn run_bench(
    inst: &PrioritizedInstance,
    cells: &[(EncodingSpec, Algorithm)],
    repeat: usize,
    solver: SolverConfig,
    encoder: EncoderOptions,
    jobs: usize,
) -> Result<Vec<BenchRow>, FilterError> {
    let repeat = repeat.max(1);
    let cell = |&(spec, alg): &(EncodingSpec, Algorithm)| -> Result<BenchRow, FilterError> {
        let mut req = FilterRequest::new(inst, spec, alg);
        req.solver = solver;
        req.encoder = encoder;
        let (mut pre, mut filt) = (0.0, 0.0);
        let mut last = None;
        for _ in 0..repeat {
            let r = answer_query(&req)?;
            pre += r.timings.preprocessing.as_secs_f64() * 1000.0;
            filt += (r.timings.encoding + r.timings.solving).as_secs_f64() * 1000.0;
            last = Some(r);
        }
        let r = last.expect("at least one run");
        Ok(BenchRow {
            semantics: spec.sem.name().into(),
            repair: repair_label(&spec),
            encoding: spec.neg.name().into(),
            algorithm: alg.name().into(),
            preprocess_ms: pre / repeat as f64,
            filter_ms: filt / repeat as f64,
            result_count: r.answers.len(),
            complete: r.complete,
        })
    };
    if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool");
        pool.install(|| cells.par_iter().map(cell).collect())
    } else {
        cells.iter().map(cell).collect()
    }
}

pub fn write_csv<W: Write>(out: W, rows: &[BenchRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use orbits_core::{NegVariant, RepairType, Semantics};

    #[test]
    fn header_and_rows() {
        let inst = orbits_core::generate::random_instance(&Default::default(), 1).unwrap();
        let spec = EncodingSpec::new(Semantics::Iar, RepairType::Pareto, NegVariant::Neg1);
        let cells = [(spec, Algorithm::Simple), (spec, Algorithm::IarFacts)];
        let rows = run_bench(&inst, &cells, 2, SolverConfig::default(), EncoderOptions::default(), 1).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].result_count, rows[1].result_count);
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(
            "semantics,repair,encoding,algorithm,preprocess_ms,filter_ms,result_count,complete\n"
        ));
        assert_eq!(text.lines().count(), 3);
    }
}
