use std::io::Write;
use std::time::Instant;

use everett_core::branching::{ChainProtocol, Repreparation};
use everett_core::experiments::{
    evolution_walk, overlap_statistics, polarizer_chain, random_projection_chain, world_count,
};
use everett_core::hilbert::{haar_random_state, haar_state_from, trial_rng, BipartiteSplit};
use everett_core::schmidt::{schmidt_decompose, spectra_gap};
use everett_core::{Complex64, StateVectorF64};

use crate::config::{ExperimentConfig, Params, Reprep};
use crate::error::CliError;
use crate::report::{
    emit_report, BranchChild, BranchReport, ChainRecord, ChainReport, ConfigEcho,
    ExperimentReport, Payload, SchmidtReport, TracePoint,
};

pub const TOOL: &str = "everett";

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport, CliError> {
    let start = Instant::now();
    let seed = config.seed;
    let result = match &config.params {
        Params::Schmidt { d_i, d_ii } => Payload::Schmidt(schmidt(*d_i, *d_ii, seed)?),
        Params::Branch { dim, weights } => {
            let run = ChainProtocol::new(*dim, 1, object_amplitudes(*dim, weights.as_deref(), seed)?, seed).run()?;
            let tree = &run.tree;
            let root = tree.node(tree.root_id())?;
            let children = root
                .children()
                .iter()
                .map(|&id| {
                    let n = tree.node(id)?;
                    Ok(BranchChild {
                        id,
                        weight: n.weight(),
                        relative_entropy: n.relative_entropy(),
                    })
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            Payload::Branch(BranchReport {
                dim: *dim,
                seed,
                rank: children.len(),
                total_entropy: tree.total_entropy(),
                children,
            })
        }
        Params::Chain {
            dim,
            devices,
            weights,
            reprep,
            angle,
        } => {
            let repreparation = match reprep {
                Reprep::None => Repreparation::None,
                Reprep::Rotation => Repreparation::Rotation(*angle),
                Reprep::Haar => Repreparation::HaarRandom,
            };
            let run = ChainProtocol::new(*dim, *devices, object_amplitudes(*dim, weights.as_deref(), seed)?, seed)
                .with_repreparation(repreparation)
                .run()?;
            let records = run
                .ledger()
                .records
                .iter()
                .map(|r| ChainRecord {
                    step: r.step,
                    total_entropy: r.total_entropy,
                    branch_entropy_sum: r.branch_sum(),
                    leaves: r.branch_entropies.len(),
                })
                .collect();
            let last = *run.followed.last().expect("at least one device");
            let followed_trace = run
                .tree
                .rescaled_entropy_trace(last, run.split)?
                .into_iter()
                .map(|(step, rescaled_entropy)| TracePoint {
                    step,
                    rescaled_entropy,
                })
                .collect();
            Payload::Chain(ChainReport {
                dim: *dim,
                devices: *devices,
                seed,
                reprep: *reprep,
                angle: (*reprep == Reprep::Rotation).then_some(*angle),
                records,
                leaf_weight_sum: run.tree.leaf_weight_sum(),
                max_identity_error: run.ledger().max_identity_error(),
                followed_trace,
            })
        }
        Params::Overlap { dim, trials } => Payload::Overlap(overlap_statistics(*dim, *trials, seed)?),
        Params::Zeno { k } => Payload::Zeno(polarizer_chain(*k)),
        Params::ZenoRandom { dim, k, trials } => {
            Payload::Zeno(random_projection_chain(*dim, *k, *trials, seed)?)
        }
        Params::Worlds(cfg) => Payload::Worlds(world_count(cfg)?),
        Params::Evolve { depth, mode, trials } => {
            Payload::Evolve(evolution_walk(*depth, *mode, *trials, seed)?)
        }
    };
    Ok(ExperimentReport {
        tool: TOOL.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: ConfigEcho {
            experiment: config.experiment,
            parameters: config.parameters.clone(),
            seed,
            format: config.output_format,
        },
        result,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// √w amplitudes for explicit weights, otherwise a seeded Haar-random state.
fn object_amplitudes(dim: usize, weights: Option<&[f64]>, seed: u64) -> Result<Vec<Complex64>, CliError> {
    Ok(match weights {
        Some(ws) => ws.iter().map(|w| Complex64::new(w.sqrt(), 0.0)).collect(),
        None => {
            // stream 1 keeps the object independent of re-preparation draws
            let psi: StateVectorF64 = haar_state_from(dim, &mut trial_rng(seed, 1))?;
            psi.amplitudes().to_vec()
        }
    })
}

fn schmidt(d_i: usize, d_ii: usize, seed: u64) -> Result<SchmidtReport, CliError> {
    let total = d_i
        .checked_mul(d_ii)
        .ok_or(everett_core::Error::DimensionCap {
            dim: usize::MAX,
            cap: everett_core::hilbert::MAX_DIM,
        })?;
    let split = BipartiteSplit::new(d_i, d_ii)?;
    let psi: StateVectorF64 = haar_random_state(total, seed)?;
    let dec = schmidt_decompose(&psi, split)?;
    let rebuilt = dec.reconstruct()?;
    let reconstruction_error = psi
        .amplitudes()
        .iter()
        .zip(rebuilt.amplitudes().iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    Ok(SchmidtReport {
        dim_i: d_i,
        dim_ii: d_ii,
        seed,
        rank: dec.rank(),
        lambdas: dec.lambdas().to_vec(),
        entanglement_entropy: dec.entanglement_entropy(),
        spectra_gap: spectra_gap(&psi, split)?,
        reconstruction_error,
    })
}

/// Runs, then writes the report to the configured path or stdout. Returns
/// the report so callers can log timings.
pub fn execute(config: &ExperimentConfig) -> Result<ExperimentReport, CliError> {
    let report = run_experiment(config)?;
    let bytes = emit_report(&report, config.output_format)?;
    match &config.output_path {
        Some(path) => std::fs::write(path, &bytes).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(&bytes)
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })?
        }
    }
    Ok(report)
}
