use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use noiseless::dynamics::{
    collective_sum, pulse_error_experiment, NoiseModel, ScheduleFamily, SweepResult, SweepSetup,
};
use noiseless::encoded::{run_encoded_circuit_under_decoupling, Gate, LogicalFrame};
use noiseless::group::{collective_flips, DecouplingGroup};
use noiseless::subsystem::{
    classify_noiseless, decompose_from, GroupAlgebras, SubsystemDecomposition, MAX_DECOMPOSE_DIM,
};
use noiseless::{Complex, Error, Operator64, PauliString, Phase, StateVector64};

use crate::config::{require, Config, ErrorSet, Family, InitialState, ModelSection, PauliTerm};
use crate::output::{num, Format, Meta, Table, Writer};
use crate::CliError;

pub struct Run<'a> {
    pub cfg: &'a Config,
    pub format: Format,
    pub pool: &'a rayon::ThreadPool,
    pub out: &'a mut Writer,
}

fn obj(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("summary is an object"),
    }
}

fn group(cfg: &Config) -> Result<DecouplingGroup<f64>, CliError> {
    let g = require(&cfg.group, "group")?
        .group_spec()
        .build::<f64>(&cfg.tolerances)?;
    log::info!(
        "group {} of order {} on dimension {}",
        g.name(),
        g.order(),
        g.dim()
    );
    Ok(g)
}

fn decomposition(
    cfg: &Config,
    g: &DecouplingGroup<f64>,
) -> Result<(GroupAlgebras<f64>, SubsystemDecomposition<f64>), CliError> {
    if g.dim() > MAX_DECOMPOSE_DIM {
        return Err(Error::Size(format!(
            "decomposition supports dimension <= {MAX_DECOMPOSE_DIM}, got {}",
            g.dim()
        ))
        .into());
    }
    let algebras = GroupAlgebras::new(g, &cfg.tolerances);
    let dec = decompose_from(g, &algebras, cfg.seed, &cfg.tolerances)?;
    log::info!("blocks (n_J, d_J): {:?}", dec.shape());
    Ok((algebras, dec))
}

pub fn decompose(run: Run<'_>) -> Result<(), CliError> {
    let cfg = run.cfg;
    let g = group(cfg)?;
    let (algebras, dec) = decomposition(cfg, &g)?;

    let mut table = Table::new(&["block", "twice_j", "n_j", "d_j", "block_dim"]);
    for b in dec.blocks() {
        table.push(vec![
            b.id.to_string(),
            b.twice_j.map(|t| t.to_string()).unwrap_or_default(),
            b.multiplicity.to_string(),
            b.irrep_dim.to_string(),
            b.block_dim().to_string(),
        ]);
    }
    let shape = dec.shape();
    let residual = g
        .generators()
        .iter()
        .map(|x| dec.off_block_residual(x))
        .fold(0.0, f64::max);
    let summary = json!({
        "group": { "name": g.name(), "order": g.order(), "dim": g.dim() },
        "accounting": {
            "dim": g.dim(),
            "sum_nj_dj": shape.iter().map(|(n, d)| n * d).sum::<usize>(),
            "sum_dj_squared": shape.iter().map(|(_, d)| d * d).sum::<usize>(),
            "sum_nj_squared": shape.iter().map(|(n, _)| n * n).sum::<usize>(),
            "blocks": shape.len(),
            "dim_group_algebra": algebras.group_algebra.len(),
            "dim_commutant": algebras.commutant.len(),
            "dim_center": algebras.center.len(),
        },
        "block_diagonalization_residual": residual,
    });
    let meta = Meta::new(cfg);
    run.out
        .table("blocks", run.format, &meta, &table, obj(summary))?;

    let isometries: Vec<Value> = dec
        .blocks()
        .iter()
        .map(|b| {
            let v = &b.isometry;
            let entries: Vec<[f64; 2]> = (0..v.nrows())
                .flat_map(|r| (0..v.ncols()).map(move |c| [v[(r, c)].re, v[(r, c)].im]))
                .collect();
            json!({ "block": b.id, "rows": v.nrows(), "cols": v.ncols(), "entries": entries })
        })
        .collect();
    run.out.json(
        "isometries.json",
        &json!({ "meta": meta, "isometries": isometries }),
    )
}

fn pauli_operator(letters: &str, n: Option<usize>) -> Result<Operator64, CliError> {
    let p = PauliString::from_letters(&letters.to_ascii_uppercase(), Phase::PLUS_ONE)
        .map_err(|e| CliError::Config(e.to_string()))?;
    if let Some(n) = n {
        if p.num_qubits() != n {
            return Err(CliError::Config(format!(
                "Pauli string {letters} is not on {n} qubits"
            )));
        }
    }
    Ok(p.to_operator())
}

fn pauli_sum(terms: &[PauliTerm], n: usize) -> Result<Operator64, CliError> {
    let mut acc = Operator64::zeros(1 << n);
    for t in terms {
        let p = pauli_operator(&t.pauli, Some(n))?;
        acc = &acc + &p.scale_real(t.coeff);
    }
    Ok(acc)
}

pub fn check_noiseless(run: Run<'_>) -> Result<(), CliError> {
    let cfg = run.cfg;
    let g = group(cfg)?;
    let n = require(&cfg.group, "group")?.group_spec().qubits();
    let (algebras, dec) = decomposition(cfg, &g)?;

    let (kind, extra) = match &cfg.errors {
        Some(e) => (e.kind, e.paulis.as_slice()),
        None => (ErrorSet::Independent, &[][..]),
    };
    let need_n =
        || n.ok_or_else(|| CliError::Config("named error sets need a group on qubits".into()));
    let mut errors = Vec::new();
    match kind {
        ErrorSet::Independent => {
            let n = need_n()?;
            for site in 0..n {
                for a in ['X', 'Y', 'Z'] {
                    errors.push(PauliString::single(n, site, a)?.to_operator());
                }
            }
        }
        ErrorSet::Collective => {
            let n = need_n()?;
            errors.extend(['X', 'Y', 'Z'].iter().map(|&a| collective_sum(n, a)));
        }
        ErrorSet::None => {}
    }
    for p in extra {
        errors.push(pauli_operator(p, n)?);
    }
    log::info!("classifying {} error operators", errors.len());

    let report = classify_noiseless(&g, &algebras, &dec, &errors, &cfg.tolerances)?;
    let mut table = Table::new(&[
        "block",
        "twice_j",
        "factor",
        "dimension",
        "noiseless",
        "reason",
        "residual",
    ]);
    for v in &report.verdicts {
        table.push(vec![
            v.block.to_string(),
            v.twice_j.map(|t| t.to_string()).unwrap_or_default(),
            label(&v.factor),
            v.dimension.to_string(),
            v.noiseless.to_string(),
            label(&v.reason),
            num(v.residual),
        ]);
    }
    let summary =
        obj(json!({ "report": report, "group": { "name": g.name(), "order": g.order() } }));
    run.out
        .table("noiseless", run.format, &Meta::new(cfg), &table, summary)
}

/// snake_case serde name of a unit enum variant.
fn label<S: serde::Serialize>(x: &S) -> String {
    match serde_json::to_value(x) {
        Ok(Value::String(s)) => s,
        other => format!("{other:?}"),
    }
}

fn model(cfg: &Config) -> Result<(&ModelSection, NoiseModel<f64>), CliError> {
    let m = require(&cfg.model, "model")?;
    let mut model = NoiseModel::seeded(m.n, m.m, m.coupling, m.strength, cfg.seed)?;
    if m.bath_exchange != 0.0 {
        model = model.with_bath_exchange(m.bath_exchange);
    }
    Ok((m, model))
}

fn initial_state(kind: InitialState, n: usize) -> Result<StateVector64, CliError> {
    let dim = 1usize << n;
    Ok(match kind {
        InitialState::Zero => StateVector64::basis(dim, 0)?,
        InitialState::Ghz => {
            let mut amps = vec![Complex::new(0.0, 0.0); dim];
            amps[0] = Complex::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            amps[dim - 1] = amps[0];
            StateVector64::from_slice(&amps)?
        }
    })
}

pub fn simulate(run: Run<'_>) -> Result<(), CliError> {
    let cfg = run.cfg;
    match (&cfg.sweep, &cfg.pulse_error) {
        (Some(_), None) => sweep(run),
        (None, Some(_)) => pulse_error(run),
        _ => Err(CliError::Config(
            "simulate needs exactly one of [sweep] or [pulse_error]".into(),
        )),
    }
}

fn family_group(cfg: &Config, n: usize) -> Result<Option<DecouplingGroup<f64>>, CliError> {
    match cfg.schedule.family {
        Family::Flip => Ok(None),
        Family::Uniform => {
            let g = group(cfg)?;
            if g.dim() != 1 << n {
                return Err(CliError::Config(format!(
                    "group dimension {} does not match {n} system qubits",
                    g.dim()
                )));
            }
            Ok(Some(g))
        }
    }
}

fn sweep(run: Run<'_>) -> Result<(), CliError> {
    let cfg = run.cfg;
    let s = require(&cfg.sweep, "sweep")?;
    let (m, model) = model(cfg)?;
    let g = family_group(cfg, m.n)?;
    let family = match &g {
        Some(g) => ScheduleFamily::Uniform(g),
        None => ScheduleFamily::Flip,
    };
    let psi0 = initial_state(s.initial_state, m.n)?;
    let setup = SweepSetup {
        model: &model,
        family,
        psi0: &psi0,
        total_time: s.total_time,
        rounding: cfg.schedule.rounding,
    };

    let start = Instant::now();
    let h = model.total_hamiltonian()?;
    let points = run.pool.install(|| {
        s.cycle_times
            .par_iter()
            .map(|&tc| setup.point(&h, tc))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let wall = start.elapsed().as_secs_f64();
    let result = SweepResult {
        seed: cfg.seed,
        points,
    };

    let mut table = Table::new(&["t_c", "fidelity", "baseline_fidelity", "cycles", "seed"]);
    for p in &result.points {
        table.push(vec![
            num(p.cycle_time),
            num(p.fidelity),
            num(p.baseline_fidelity),
            p.cycles.to_string(),
            cfg.seed.to_string(),
        ]);
        log::info!(
            "t_c {} fidelity {:.12} baseline {:.12}",
            p.cycle_time,
            p.fidelity,
            p.baseline_fidelity
        );
    }
    let summary = json!({
        "experiment": "decoupling_sweep",
        "total_time": s.total_time,
        "simulated_time": result.points.iter().map(|p| p.simulated_time).collect::<Vec<_>>(),
        "loglog_slope": result.loglog_slope(),
        "wall_time_s": wall,
    });
    run.out
        .table("sweep", run.format, &Meta::new(cfg), &table, obj(summary))
}

fn pulse_error(run: Run<'_>) -> Result<(), CliError> {
    let cfg = run.cfg;
    let p = require(&cfg.pulse_error, "pulse_error")?;
    let (m, model) = model(cfg)?;
    let g = match cfg.group {
        Some(_) => group(cfg)?,
        None => collective_flips(m.n)?,
    };
    let (_, dec) = decomposition(cfg, &g)?;
    let schedule = match cfg.schedule.family {
        Family::Flip => ScheduleFamily::Flip,
        Family::Uniform => ScheduleFamily::Uniform(&g),
    }
    .build(m.n, p.cycle_time)?
    .with_cycles(p.cycles);
    let generator = pauli_sum(&p.generator, m.n)?;

    // uniform superposition over the commutant factor
    let dim_c = dec.block(p.block)?.multiplicity;
    let amp = Complex::new(1.0 / (dim_c as f64).sqrt(), 0.0);
    let logical = StateVector64::from_slice(&vec![amp; dim_c])?;

    let start = Instant::now();
    let outcomes = run.pool.install(|| {
        p.epsilons
            .par_iter()
            .map(|&eps| {
                pulse_error_experiment(&model, &schedule, &dec, p.block, &logical, &generator, eps)
            })
            .collect::<Result<Vec<_>, _>>()
    })?;
    let wall = start.elapsed().as_secs_f64();

    let mut table = Table::new(&[
        "epsilon",
        "encoded_fidelity",
        "reference_fidelity",
        "cycles",
        "seed",
    ]);
    for o in &outcomes {
        table.push(vec![
            num(o.epsilon),
            num(o.encoded_fidelity),
            num(o.reference_fidelity),
            o.cycles.to_string(),
            cfg.seed.to_string(),
        ]);
    }
    let summary = json!({
        "experiment": "pulse_error",
        "block": p.block,
        "logical_dim": dim_c,
        "cycle_time": p.cycle_time,
        "wall_time_s": wall,
    });
    run.out.table(
        "pulse_error",
        run.format,
        &Meta::new(cfg),
        &table,
        obj(summary),
    )
}

pub fn gates(run: Run<'_>) -> Result<(), CliError> {
    let cfg = run.cfg;
    let c = require(&cfg.circuit, "circuit")?;
    let (m, model) = model(cfg)?;
    let frame = LogicalFrame::<f64>::build(m.n, c.block)?;
    let circuit = c
        .gates
        .iter()
        .map(|g| g.to_gate())
        .collect::<Result<Vec<Gate>, _>>()?;
    log::info!(
        "{} gates on {} logical qubits",
        circuit.len(),
        frame.logical_qubits()
    );

    let start = Instant::now();
    let outcomes = run.pool.install(|| {
        c.cycle_times
            .par_iter()
            .map(|&tc| {
                run_encoded_circuit_under_decoupling(&frame, &circuit, &model, tc, &c.limits)
            })
            .collect::<Result<Vec<_>, _>>()
    })?;
    let wall = start.elapsed().as_secs_f64();

    let mut table = Table::new(&[
        "t_c",
        "process_fidelity",
        "total_cycles",
        "total_time",
        "seed",
    ]);
    for o in &outcomes {
        table.push(vec![
            num(o.cycle_time),
            num(o.process_fidelity),
            o.total_cycles.to_string(),
            num(o.total_time),
            cfg.seed.to_string(),
        ]);
    }
    let summary = json!({
        "experiment": "encoded_circuit",
        "block": c.block,
        "logical_qubits": frame.logical_qubits(),
        "gates": c.gates,
        "wall_time_s": wall,
    });
    run.out
        .table("gates", run.format, &Meta::new(cfg), &table, obj(summary))
}
