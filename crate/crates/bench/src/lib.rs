//! Benchmark harness for the SSGS decoders.
//!
//! [`run_sweep`] varies one generator parameter at a time and measures the
//! total decode time each implementation spends inside the local search.
//! [`run_adaptive_trace`] records which implementation the hybrid decoder
//! picks at every execution. [`report`] holds the CSV and trace formats.

pub mod report;
pub mod selftest;
pub mod sweep;
pub mod trace;

pub use report::{read_records, read_trace, write_records, write_trace, Metadata};
pub use sweep::{run_sweep, BenchRecord, Mode, SweepConfig, SweepError, SweepReport};
pub use trace::{run_adaptive_trace, AdaptiveTrace, TraceConfig, TraceError};

use rcpsp_ssgs::ssgs::Implementation;
use rcpsp_ssgs::{
    BfDecoder, ConvDecoder, Decoder, HybridConfig, HybridDecoder, Instance, NbfDecoder,
};

/// A boxed decoder of the given implementation. The hybrid uses `hybrid`.
pub fn make_decoder<'a>(
    instance: &'a Instance,
    implementation: Implementation,
    hybrid: &HybridConfig,
) -> Box<dyn Decoder + 'a> {
    match implementation {
        Implementation::Conv => Box::new(ConvDecoder::new(instance)),
        Implementation::Nbf => Box::new(NbfDecoder::new(instance)),
        Implementation::Bf => Box::new(
            BfDecoder::with_width(instance, hybrid.width)
                .expect("width was validated with the hybrid config"),
        ),
        Implementation::Hybrid => Box::new(
            HybridDecoder::with_config(instance, hybrid.clone())
                .expect("hybrid config was validated"),
        ),
    }
}
