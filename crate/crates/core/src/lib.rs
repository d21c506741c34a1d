//! Serial schedule generation scheme (SSGS) for the resource-constrained
//! project scheduling problem.
//!
//! The crate provides four decoders that turn a precedence-feasible job
//! permutation into the same active schedule, differing only in speed:
//!
//! * [`ConvDecoder`]: forward slot scan over every resource, no preprocessing.
//! * [`NbfDecoder`]: reversed window scan with skip memory, per-job consumed
//!   resource lists ordered by observed insufficiency, and a dedicated
//!   single-resource kernel.
//! * [`BfDecoder`]: the same scan with a one-word resource-level filter per
//!   job and per slot, so most slot tests are a single `AND NOT`.
//! * [`HybridDecoder`]: picks between the two previous ones online using
//!   paired timings and a sign test, relearning every period.
//!
//! Instance tooling (PSPLIB and native text formats, a parameterised random
//! generator, schedule validation) and a small local-search driver live in
//! [`instance`] and [`metaheuristic`].
//!
//! ```
//! use rcpsp_ssgs::{ConvDecoder, Decoder, HybridDecoder, GeneratorParams};
//! use rcpsp_ssgs::instance::{generate_instance, random_topological_permutation};
//!
//! let instance = generate_instance(&GeneratorParams { num_jobs: 30, ..Default::default() }).unwrap();
//! let permutation = random_topological_permutation(&instance, 7).unwrap();
//!
//! let mut conv = ConvDecoder::new(&instance);
//! let mut hybrid = HybridDecoder::new(&instance);
//! let expected = conv.decode(&permutation).unwrap().clone();
//! assert_eq!(hybrid.decode(&permutation).unwrap(), &expected);
//! ```

pub mod bloom;
pub mod hybrid;
pub mod instance;
pub mod metaheuristic;
pub mod num;
pub mod ssgs;

pub use bloom::{BfDecoder, BloomStructure, ResourceDistributions};
pub use hybrid::{HybridConfig, HybridDecoder};
pub use instance::{GeneratorParams, Instance, Job, Permutation, Schedule};
pub use ssgs::{AvailabilityProfile, ConvDecoder, Decoder, NbfDecoder, SsgsError};

/// Demand and availability distributions in double precision, as used at
/// run time by the Bloom structure builder.
pub type Distributions = ResourceDistributions<f64>;

/// Distributions over exact rationals; the builder's deletion order is then
/// free of rounding, which matters when comparing against an oracle.
pub type ExactDistributions = ResourceDistributions<num_rational::Rational64>;
