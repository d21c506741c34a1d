use crate::make_decoder;
use anyhow::{bail, Context, Result};
use rcpsp_ssgs::instance::{
    generate_instance, random_topological_permutation, validate_schedule, Axis,
};
use rcpsp_ssgs::ssgs::Implementation;
use rcpsp_ssgs::{GeneratorParams, HybridConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SelftestSummary {
    pub instances: usize,
    pub schedules: usize,
}

/// Decodes `permutations` random permutations of one small instance per
/// default axis value with every implementation and checks that all
/// schedules are identical and feasible. The hybrid runs with a short
/// period so restarts happen.
pub fn selftest(permutations: u64, seed: u64) -> Result<SelftestSummary> {
    let base = GeneratorParams {
        num_jobs: 30,
        seed,
        ..Default::default()
    };
    let hybrid = HybridConfig {
        period: 16,
        alternation_cap: 6,
        ..Default::default()
    };
    let mut summary = SelftestSummary {
        instances: 0,
        schedules: 0,
    };
    for axis in Axis::ALL {
        for &value in axis.default_values() {
            let params = axis.apply(&base, value);
            let instance =
                generate_instance(&params).with_context(|| format!("generating {axis}={value}"))?;
            let mut decoders: Vec<_> = Implementation::ALL
                .iter()
                .map(|&imp| make_decoder(&instance, imp, &hybrid))
                .collect();
            for k in 0..permutations {
                let pi = random_topological_permutation(&instance, seed.wrapping_add(k))?;
                let expected = decoders[0].decode(&pi)?.clone();
                let report = validate_schedule(&instance, &expected);
                if !report.is_feasible() {
                    bail!("{axis}={value}, permutation {k}: infeasible schedule {report:?}");
                }
                for d in &mut decoders[1..] {
                    if d.decode(&pi)? != &expected {
                        bail!(
                            "{axis}={value}, permutation {k}: {} differs from Conv",
                            d.implementation()
                        );
                    }
                }
                summary.schedules += decoders.len();
            }
            summary.instances += 1;
        }
    }
    Ok(summary)
}
