//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use noiseless::dynamics::{
    decoupling_sweep, pulse_error_experiment, CouplingKind, CycleRounding, CycleSchedule,
    NoiseModel, ScheduleFamily, SweepSetup,
};
use noiseless::encoded::{
    encoded_gate_generator, encoded_swap_check, j0_noiseless_qubit, lie_algebra_dimension,
    GateKind, LogicalFrame,
};
use noiseless::group::{collective_flips, symmetric_group, trivial, DecouplingGroup};
use noiseless::pauli::centralizer_strings;
use noiseless::subsystem::{decompose, symmetric_subsystem_dim, GroupAlgebras};
use noiseless::{Complex, NumericPolicy, Operator64, PauliString, StateVector64};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    check(t < limit, || format!("took {t:.2?}, limit {limit:?}"))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst_vanish: f64 = 0.0;
    let mut worst_fixed: f64 = 0.0;
    let mut strings = 0;
    for n in [2, 4, 6] {
        let g = collective_flips::<f64>(n).map_err(|e| e.to_string())?;
        for site in 0..n {
            for a in ['X', 'Y', 'Z'] {
                let e = PauliString::single(n, site, a)
                    .unwrap()
                    .to_operator::<f64>();
                worst_vanish = worst_vanish.max(g.project_onto_commutant(&e).unwrap().max_abs());
            }
        }
        let gens = [
            PauliString::collective(n, 'X').unwrap(),
            PauliString::collective(n, 'Z').unwrap(),
        ];
        let cent = centralizer_strings(n, &gens).unwrap();
        check(cent.len() == 1 << (2 * (n - 1)), || {
            format!("n={n}: {} centralizer strings", cent.len())
        })?;
        strings += cent.len();
        for p in &cent {
            let op = p.to_operator::<f64>();
            worst_fixed = worst_fixed.max(g.project_onto_commutant(&op).unwrap().max_abs_diff(&op));
        }
    }
    check(worst_vanish <= 1e-12, || {
        format!("max |P(sigma)| = {worst_vanish:e}")
    })?;
    check(worst_fixed <= 1e-12, || {
        format!("max |P(p) - p| = {worst_fixed:e}")
    })?;
    within(start, Duration::from_secs(10))?;
    Ok(format!(
        "max |P(sigma)| = {worst_vanish:.1e}, {strings} centralizer strings fixed to {worst_fixed:.1e}, {:.2?}",
        start.elapsed()
    ))
}

fn generator_residual(
    g: &DecouplingGroup<f64>,
    dec: &noiseless::subsystem::SubsystemDecomposition<f64>,
) -> f64 {
    g.generators()
        .iter()
        .map(|x| dec.off_block_residual(x))
        .fold(0.0, f64::max)
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let flips = collective_flips::<f64>(4).unwrap();
    let dflips = decompose(&flips).map_err(|e| e.to_string())?;
    check(dflips.shape() == vec![(4, 1); 4], || {
        format!("flips shape {:?}", dflips.shape())
    })?;

    let s4 = symmetric_group::<f64>(4).unwrap();
    let ds4 = decompose(&s4).map_err(|e| e.to_string())?;
    let mut shape = ds4.shape();
    shape.sort();
    check(shape == vec![(1, 2), (3, 3), (5, 1)], || {
        format!("S4 shape {:?}", ds4.shape())
    })?;

    let residual = generator_residual(&flips, &dflips).max(generator_residual(&s4, &ds4));
    check(residual < 1e-8, || {
        format!("off-block residual {residual:e}")
    })?;
    within(start, Duration::from_secs(30))?;
    Ok(format!(
        "flips {:?}, S4 {:?}, residual {residual:.1e}",
        dflips.shape(),
        ds4.shape()
    ))
}

fn criterion_3() -> Outcome {
    let policy = NumericPolicy::default();
    let mut lines = Vec::new();
    for (name, g) in [
        ("trivial", trivial::<f64>(4).unwrap()),
        ("flips", collective_flips(4).unwrap()),
        ("S4", symmetric_group(4).unwrap()),
    ] {
        let alg = GroupAlgebras::new(&g, &policy);
        let dec = decompose(&g).map_err(|e| e.to_string())?;
        let s = dec.shape();
        let sum_nd: usize = s.iter().map(|(n, d)| n * d).sum();
        let sum_d2: usize = s.iter().map(|(_, d)| d * d).sum();
        let sum_n2: usize = s.iter().map(|(n, _)| n * n).sum();
        let got = (sum_nd, sum_d2, sum_n2, s.len());
        let want = (
            g.dim(),
            alg.group_algebra.len(),
            alg.commutant.len(),
            alg.center.len(),
        );
        check(got == want, || {
            format!("{name}: sums {got:?} vs dims {want:?}")
        })?;
        lines.push(format!("{name} {want:?}"));
    }
    Ok(format!("(d, dim CG, dim CG', dim Z): {}", lines.join(", ")))
}

fn criterion_4() -> Outcome {
    let mut checked = 0;
    for n in 2..=4u32 {
        let dec =
            decompose(&symmetric_group::<f64>(n as usize).unwrap()).map_err(|e| e.to_string())?;
        for twice_j in (n % 2..=n).step_by(2) {
            let formula = symmetric_subsystem_dim(n, twice_j).map_err(|e| e.to_string())?;
            let block = dec
                .block_with_spin(twice_j)
                .ok_or_else(|| format!("n={n}: no block with 2J={twice_j}"))?;
            check(block.irrep_dim as u64 == formula, || {
                format!(
                    "n={n}, 2J={twice_j}: d_J {} vs formula {formula}",
                    block.irrep_dim
                )
            })?;
            check(block.multiplicity == twice_j as usize + 1, || {
                format!("n={n}, 2J={twice_j}: n_J {}", block.multiplicity)
            })?;
            checked += 1;
        }
        check(dec.blocks().len() == (n / 2 + 1) as usize, || {
            format!("n={n}: extra blocks")
        })?;
    }
    Ok(format!("{checked} (n, J) pairs match"))
}

fn criterion_5() -> Outcome {
    for n in [4, 6] {
        let f = LogicalFrame::<f64>::build(n, 0).map_err(|e| e.to_string())?;
        let (xs, zs) = (f.logical_x(), f.logical_z());
        let flips = [
            PauliString::collective(n, 'X').unwrap(),
            PauliString::collective(n, 'Z').unwrap(),
        ];
        for i in 0..n - 2 {
            for g in &flips {
                check(
                    xs[i].commutes(g).unwrap() && zs[i].commutes(g).unwrap(),
                    || format!("n={n}: logical {i} leaves the centralizer"),
                )?;
            }
            for j in 0..n - 2 {
                check(xs[i].commutes(&zs[j]).unwrap() == (i != j), || {
                    format!("n={n}: [X{i}, Z{j}]")
                })?;
                check(xs[i].commutes(&xs[j]).unwrap(), || {
                    format!("n={n}: [X{i}, X{j}]")
                })?;
                check(zs[i].commutes(&zs[j]).unwrap(), || {
                    format!("n={n}: [Z{i}, Z{j}]")
                })?;
            }
        }
    }
    let f = LogicalFrame::<f64>::build(4, 0).unwrap();
    let kinds = [
        GateKind::XRot(1),
        GateKind::ZRot(1),
        GateKind::XRot(2),
        GateKind::ZRot(2),
        GateKind::Exchange(1, 2),
    ];
    let restricted: Vec<Operator64> = kinds
        .iter()
        .map(|&k| f.restrict(&encoded_gate_generator(4, k).unwrap()).unwrap())
        .collect();
    let rank = lie_algebra_dimension(&restricted, 1e-10);
    check(rank >= 15, || format!("Lie rank {rank}"))?;
    Ok(format!(
        "commutation tables exact at n = 4, 6; Lie rank {rank}"
    ))
}

fn criterion_6() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut pairs = 0;
    for n in [4, 6] {
        for block in 0..4 {
            let f = LogicalFrame::<f64>::build(n, block).unwrap();
            for i in 1..=n - 2 {
                for j in i + 1..=n - 2 {
                    let c = encoded_swap_check(&f, i, j, 1e-10).map_err(|e| e.to_string())?;
                    check(c.passed, || format!("n={n} block {block} ({i},{j}): {c:?}"))?;
                    worst = worst.max(c.residual).max(c.leakage);
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!(
        "{pairs} (n, block, i, j) cases, max residual {worst:.1e}"
    ))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let model = NoiseModel::<f64>::seeded(2, 1, CouplingKind::Independent, 0.1, 0)
        .map_err(|e| e.to_string())?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let bell = StateVector64::from_slice(&[
        Complex::new(s, 0.0),
        Complex::new(0.0, 0.0),
        Complex::new(0.0, 0.0),
        Complex::new(s, 0.0),
    ])
    .unwrap();
    let setup = SweepSetup {
        model: &model,
        family: ScheduleFamily::Flip,
        psi0: &bell,
        total_time: 32.0,
        rounding: CycleRounding::Exact,
    };
    let res = decoupling_sweep(&setup, &[1.0, 0.5, 0.25, 0.125]).map_err(|e| e.to_string())?;
    let inf: Vec<f64> = res.points.iter().map(|p| p.infidelity()).collect();
    check(inf.windows(2).all(|w| w[1] < w[0]), || {
        format!("infidelities {inf:?}")
    })?;
    let slope = res.loglog_slope().ok_or("slope undefined")?;
    check(slope >= 1.5, || format!("slope {slope}"))?;
    let last = res.points.last().unwrap();
    let gain = last.fidelity - last.baseline_fidelity;
    check(gain >= 0.05, || format!("gain over baseline {gain}"))?;
    within(start, Duration::from_secs(120))?;
    Ok(format!(
        "1-F = {:?}, slope {slope:.3}, F - F_0 = {gain:.3}, {:.2?}",
        inf.iter().map(|x| format!("{x:.2e}")).collect::<Vec<_>>(),
        start.elapsed()
    ))
}

fn criterion_8() -> Outcome {
    let n = 4;
    let model = NoiseModel::<f64>::seeded(n, 1, CouplingKind::Independent, 0.1, 11)
        .unwrap()
        .without_coupling();
    let g = collective_flips::<f64>(n).unwrap();
    let dec = decompose(&g).map_err(|e| e.to_string())?;
    let schedule = CycleSchedule::<f64>::flip_cycle(n, 0.5)
        .unwrap()
        .with_cycles(20);
    let logical = StateVector64::normalized(
        [(1.0, 0.0), (0.0, 0.5), (-0.3, 0.2), (0.4, -0.7)]
            .iter()
            .map(|&(r, i)| Complex::new(r, i))
            .collect::<Vec<_>>()
            .into(),
    )
    .unwrap();
    let xn = PauliString::collective(n, 'X')
        .unwrap()
        .to_operator::<f64>();
    let yn = PauliString::collective(n, 'Y')
        .unwrap()
        .to_operator::<f64>();
    let zn = PauliString::collective(n, 'Z')
        .unwrap()
        .to_operator::<f64>();
    let errors = [
        ("X^4", xn.clone()),
        ("Y^4", yn),
        ("X^4 + Z^4/2", &xn + &zn.scale_real(0.5)),
    ];
    let (mut worst_enc, mut best_ref): (f64, f64) = (0.0, 0.0);
    let mut runs = 0;
    for (name, e) in &errors {
        for block in 0..4 {
            for eps in [0.02, 0.05, 0.1] {
                let o = pulse_error_experiment(&model, &schedule, &dec, block, &logical, e, eps)
                    .map_err(|e| e.to_string())?;
                check((1.0 - o.encoded_fidelity).abs() <= 1e-9, || {
                    format!(
                        "{name} block {block} eps {eps}: encoded F = {}",
                        o.encoded_fidelity
                    )
                })?;
                check(o.reference_fidelity < 1.0 - 1e-4, || {
                    format!("{name} eps {eps}: reference F = {}", o.reference_fidelity)
                })?;
                worst_enc = worst_enc.max((1.0 - o.encoded_fidelity).abs());
                best_ref = best_ref.max(o.reference_fidelity);
                runs += 1;
            }
        }
    }
    Ok(format!(
        "{runs} runs, max |1 - F_enc| = {worst_enc:.1e}, max F_ref = {best_ref:.4}"
    ))
}

fn criterion_9() -> Outcome {
    let q = j0_noiseless_qubit::<f64>(4).map_err(|e| e.to_string())?;
    let v = q.verify(100, 2024).map_err(|e| e.to_string())?;
    check(v.samples == 100 && v.max_infidelity <= 1e-9, || {
        format!("{v:?}")
    })?;
    Ok(format!(
        "100 rotations, max 1 - F = {:.1e}",
        v.max_infidelity
    ))
}

fn criterion_10() -> Outcome {
    let demos = Path::new(env!("CARGO_MANIFEST_DIR")).join("demos");
    let tmp = std::env::temp_dir().join(format!("noiseless-acceptance-{}", std::process::id()));
    let mut compared = 0;
    let mut names: Vec<_> = fs::read_dir(&demos)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "toml"))
        .collect();
    names.sort();
    for cfg in names {
        let stem = cfg.file_stem().unwrap().to_str().unwrap().to_string();
        let cmd = match stem.split('_').next().unwrap() {
            "decompose" => "decompose",
            "check" => "check-noiseless",
            "simulate" => "simulate",
            "gates" => "gates",
            _ => continue,
        };
        let mut outputs = Vec::new();
        for (k, jobs) in ["1", "4"].iter().enumerate() {
            let out = tmp.join(format!("{stem}-{k}"));
            let o = Command::new(env!("CARGO_BIN_EXE_noiseless"))
                .args([cmd, "--jobs", jobs, "--config"])
                .arg(&cfg)
                .arg("--out")
                .arg(&out)
                .env("RUST_LOG", "error")
                .output()
                .map_err(|e| e.to_string())?;
            check(o.status.success(), || {
                format!("{stem}: {}", String::from_utf8_lossy(&o.stderr))
            })?;
            let mut csvs: Vec<_> = fs::read_dir(&out)
                .unwrap()
                .map(|e| e.unwrap().path())
                .filter(|p| p.extension().is_some_and(|e| e == "csv"))
                .collect();
            csvs.sort();
            outputs.push(
                csvs.iter()
                    .map(|p| fs::read(p).unwrap())
                    .collect::<Vec<_>>(),
            );
        }
        check(!outputs[0].is_empty() && outputs[0] == outputs[1], || {
            format!("{stem}: CSV differs between runs")
        })?;
        compared += 1;
    }
    let _ = fs::remove_dir_all(&tmp);
    check(compared >= 8, || {
        format!("only {compared} demo configs found")
    })?;
    Ok(format!(
        "{compared} demo configs byte-identical across reruns"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("projector correctness", criterion_1),
        ("decomposition structure", criterion_2),
        ("dimension accounting", criterion_3),
        ("dimension formula", criterion_4),
        ("logical algebra", criterion_5),
        ("encoded swap", criterion_6),
        ("decoupling efficacy", criterion_7),
        ("robustness to in-algebra pulse errors", criterion_8),
        ("J = 0 noiseless subsystem", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
