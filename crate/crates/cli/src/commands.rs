//! The five subcommands. Each returns the staged outputs and, for a VQE run
//! that misses its tolerance, a convergence error raised after writing.

use serde_json::{json, Value};

use qembed_core::fci::{self, DeterminantBasis};
use qembed_core::integrals::format_fcidump;
use qembed_core::qubits::{ParitySector, DENSE_QUBIT_LIMIT};
use qembed_core::units::HARTREE_TO_EV;
use qembed_core::vqe::{
    build_uccsd, ground_energy, run_vqe, Algorithm, Backend, InitialPoint, MinimizeOptions, Screening, VqeOptions,
};
use qembed_core::{Encoding, FciMethod, QubitMapping, SlaterDeterminant};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::Outputs;
use crate::problem::{self, Problem};

fn header(kind: &str, cfg: &RunConfig, p: &Problem) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("kind".into(), json!(kind));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("config".into(), serde_json::to_value(cfg).expect("config serializes"));
    m.insert(
        "sector".into(),
        json!({ "n_orb": p.n_orb(), "n_alpha": p.n_alpha, "n_beta": p.n_beta, "ms": p.ms() }),
    );
    m.insert("active_orbitals".into(), json!(p.orbitals));
    m.insert("frozen_orbitals".into(), json!(p.frozen));
    m
}

pub fn screen(cfg: &RunConfig) -> Result<Outputs, CliError> {
    if cfg.input.host.is_none() {
        cfg.validate_input()?;
        return Err(CliError::config("screen needs a host input (input.host or --host)"));
    }
    let p = problem::load(cfg)?;
    let report = p.screening.as_ref().expect("host input is always screened");
    let mut out = Outputs::default();
    out.add(
        "effective.fcidump",
        format_fcidump(&p.ints, p.n_alpha + p.n_beta, p.n_alpha as i64 - p.n_beta as i64),
    );
    let mut meta = header("screen", cfg, &p);
    meta.insert("screening".into(), serde_json::to_value(report).expect("report serializes"));
    let sym = p.ints.validate();
    meta.insert(
        "symmetry".into(),
        json!({ "max_one_body_asymmetry": sym.max_one_body_asymmetry, "max_two_body_asymmetry": sym.max_two_body_asymmetry }),
    );
    out.json("screen.json", &Value::Object(meta));
    Ok(out)
}

pub fn fci(cfg: &RunConfig) -> Result<Outputs, CliError> {
    let p = problem::load(cfg)?;
    let method: FciMethod = cfg.fci.method.parse()?;
    let spec = fci::solve_folded(&p.ints, p.n_alpha, p.n_beta, cfg.fci.states, method)?;
    let e0 = spec.ground_energy();
    let states: Vec<Value> = spec
        .energies
        .iter()
        .zip(&spec.s_squared)
        .zip(&spec.states)
        .enumerate()
        .map(|(i, ((e, s2), st))| {
            let leading: Vec<Value> = st
                .leading(0.05)
                .into_iter()
                .map(|(d, c)| json!({ "determinant": d.label(p.n_orb()), "coefficient": c }))
                .collect();
            json!({
                "state": i,
                "energy_hartree": e,
                "energy_ev": e * HARTREE_TO_EV,
                "excitation_ev": (e - e0) * HARTREE_TO_EV,
                "s_squared": s2,
                "leading": leading,
            })
        })
        .collect();
    let mut meta = header("fci", cfg, &p);
    meta.insert("method".into(), json!(cfg.fci.method.to_ascii_lowercase()));
    meta.insert("dimension".into(), json!(spec.states[0].basis.len()));
    meta.insert("states".into(), json!(states));
    let mut out = Outputs::default();
    out.add("spectrum.txt", spec.report());
    out.json("fci.json", &Value::Object(meta));
    Ok(out)
}

fn mapping(cfg: &RunConfig, p: &Problem) -> Result<QubitMapping, CliError> {
    let encoding: Encoding = cfg.mapping.encoding.parse()?;
    let taper = cfg.mapping.taper.unwrap_or(encoding == Encoding::Parity);
    if taper && encoding != Encoding::Parity {
        return Err(CliError::config(format!("tapering needs the parity encoding, not {encoding}")));
    }
    let sector = taper.then(|| ParitySector::from_electrons(p.n_alpha, p.n_beta));
    if taper && p.n_orb() < 2 {
        return Err(CliError::config("tapering needs at least 2 active orbitals"));
    }
    Ok(QubitMapping::new(encoding, p.n_orb(), sector)?)
}

fn mapping_json(m: &QubitMapping) -> Value {
    json!({
        "encoding": m.encoding().short_name(),
        "tapered": m.sector().is_some(),
        "n_qubits": m.n_qubits(),
    })
}

pub fn map(cfg: &RunConfig) -> Result<Outputs, CliError> {
    let p = problem::load(cfg)?;
    let m = mapping(cfg, &p)?;
    let ham = m.hamiltonian(&p.ints)?;
    let mut meta = header("map", cfg, &p);
    meta.insert("mapping".into(), mapping_json(&m));
    meta.insert("n_terms".into(), json!(ham.len()));
    meta.insert("constant".into(), json!(ham.constant().re));
    if m.n_qubits() <= DENSE_QUBIT_LIMIT.min(12) {
        meta.insert("ground_energy_hartree".into(), json!(ground_energy(&ham)?));
    }
    let mut out = Outputs::default();
    out.add("hamiltonian.pauli", ham.to_text());
    out.json("map.json", &Value::Object(meta));
    Ok(out)
}

/// Determinant with the lowest diagonal energy, first in basis order on ties.
fn lowest_determinant(p: &Problem) -> Result<SlaterDeterminant, CliError> {
    let basis = DeterminantBasis::new(p.n_orb(), p.n_alpha, p.n_beta)?;
    let mut best: Option<(f64, SlaterDeterminant)> = None;
    for d in basis.iter() {
        let e = fci::matrix_element(&d, &d, &p.ints);
        if best.is_none_or(|(b, _)| e < b) {
            best = Some((e, d));
        }
    }
    Ok(best.expect("a sector holds at least one determinant").1)
}

pub fn vqe(cfg: &RunConfig) -> Result<(Outputs, Option<CliError>), CliError> {
    let p = problem::load(cfg)?;
    let m = mapping(cfg, &p)?;
    let ham = m.hamiltonian(&p.ints)?;
    let v = &cfg.vqe;
    let reference = match &v.reference {
        Some(label) => {
            let d = SlaterDeterminant::parse_label(label)?;
            if label.len() != p.n_orb() {
                return Err(CliError::config(format!(
                    "reference '{label}' has {} orbitals, the active space has {}",
                    label.len(),
                    p.n_orb()
                )));
            }
            if d.alpha.count_ones() as usize != p.n_alpha || d.beta.count_ones() as usize != p.n_beta {
                return Err(CliError::config(format!(
                    "reference '{label}' is not in the ({}, {}) sector",
                    p.n_alpha, p.n_beta
                )));
            }
            d
        }
        None => lowest_determinant(&p)?,
    };
    let screening: Screening = v.screening.parse()?;
    let ansatz = build_uccsd(&reference, &m, screening, Some(&p.ints))?;
    let algorithm: Algorithm = v.optimizer.parse()?;
    let initial = match v.initial.to_ascii_lowercase().as_str() {
        "zero" => InitialPoint::Zero,
        "random" => InitialPoint::Random { seed: v.seed },
        other => return Err(CliError::config(format!("unknown initial point '{other}' (expected zero or random)"))),
    };
    if !(0.0..=1.0).contains(&v.depolarizing) {
        return Err(CliError::config("depolarizing must lie in [0, 1]"));
    }
    let backend = if v.shots == 0 {
        Backend::Exact
    } else {
        Backend::Shots {
            shots: v.shots,
            seed: v.seed,
        }
    };
    let e_fci = fci::solve_folded(&p.ints, p.n_alpha, p.n_beta, 1, FciMethod::Dense)?.ground_energy();
    let opts = VqeOptions {
        backend,
        algorithm,
        initial,
        minimize: MinimizeOptions {
            max_evaluations: v.max_evaluations,
            initial_step: v.initial_step,
            ..MinimizeOptions::default()
        },
        tolerance: v.tolerance,
        depolarizing: v.depolarizing,
        reference_energy: Some(e_fci),
    };
    let trace = run_vqe(&ham, &ansatz, &opts)?;

    let mut meta = header("vqe", cfg, &p);
    meta.insert("mapping".into(), mapping_json(&m));
    meta.insert(
        "ansatz".into(),
        json!({
            "reference": reference.label(p.n_orb()),
            "screening": screening.name(),
            "n_params": ansatz.n_params(),
            "enumeration": "spin-orbital singles then doubles, occupied to virtual, lexicographic; \
                            product applied last generator first",
            "excitations": ansatz.excitations().iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            "dropped": ansatz.dropped().iter().map(|(e, r)| format!("{e} {r:?}")).collect::<Vec<_>>(),
        }),
    );
    meta.insert(
        "backend".into(),
        json!({ "name": backend.name(), "shots": backend.shots(), "seed": v.seed, "depolarizing": v.depolarizing }),
    );
    meta.insert("optimizer".into(), json!(algorithm.name()));
    meta.insert(
        "result".into(),
        json!({
            "evaluations": trace.evaluations(),
            "exhausted": trace.exhausted,
            "converged": trace.converged,
            "final_energy_hartree": trace.final_energy,
            "final_energy_ev": trace.final_energy * HARTREE_TO_EV,
            "final_stderr_hartree": trace.final_stderr,
            "final_exact_energy_hartree": trace.final_exact_energy,
            "fci_energy_hartree": e_fci,
            "gap_ev": (trace.final_energy - e_fci) * HARTREE_TO_EV,
            "qubit_ground_energy_hartree": trace.exact_ground_energy,
            "parameters": trace.final_params,
        }),
    );
    let mut out = Outputs::default();
    out.add("trace.csv", trace.to_csv());
    out.json("vqe.json", &Value::Object(meta));
    let failure = (!trace.converged).then(|| {
        CliError::convergence(format!(
            "VQE stopped at {:.10} Ha, {:.3e} Ha from the FCI energy of the sector (tolerance {:.1e})",
            trace.final_energy,
            (trace.final_energy - e_fci).abs(),
            v.tolerance
        ))
    });
    Ok((out, failure))
}
