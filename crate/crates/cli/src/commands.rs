//! Subcommand handlers.

use std::path::{Path, PathBuf};

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use relqi::channels::{
    boost_channel_approx, boost_channel_exact_with_nodes, boost_mixture, collective_twirl, gamma,
    twirl_single, BoostPrior, TwirlMethod, TwirlResult,
};
use relqi::lorentz::{
    boost_from_velocity, rotation_about, wigner_rotation, FourVector, LorentzElement,
};
use relqi::photon::{
    little_group_phase, photon_codec_decode, photon_codec_encode, TwoPhotonState,
};
use relqi::qmath::io::{state_to_json, MatrixJson, StateJson};
use relqi::qmath::{
    apply_channel, choi_check, fidelity, trace_distance, DensityMatrix, PureState, QuantumChannel,
};
use relqi::schur::{decode as codec_decode, encode as codec_encode, make_codec, multiplicity};
use relqi::wavepacket::{analytic_gaussian_overlap, make_packet_with_nodes, overlap};
use relqi::{Error, Result as CoreResult};

use crate::report::{fmt_f64, Csv, Meta, Payload};
use crate::{ChannelCmd, CliError, CodecCmd, Command, Globals, MethodArg, PhotonCmd, SweepKind};

type Outcome = Result<(Payload, Value, i32), CliError>;

pub fn dispatch(cmd: &Command, globals: &Globals, meta: &Meta) -> Outcome {
    match cmd {
        Command::Wigner { boost, momentum } => wigner(boost, momentum),
        Command::Overlap {
            delta,
            a_max,
            points,
        } => overlap_table(*delta, *a_max, *points, globals),
        Command::Channel { kind } => channel(kind, globals),
        Command::Twirl {
            qubits,
            method,
            samples,
            state,
        } => twirl(*qubits, *method, *samples, state.as_ref(), globals),
        Command::Codec { op } => codec(op, globals),
        Command::Multiplicity { n_max } => multiplicity_table(*n_max),
        Command::Photon { op } => photon(op, globals),
        Command::Sweep {
            kind,
            v,
            v_min,
            v_max,
            delta,
            delta_min,
            delta_max,
            points,
            state,
        } => sweep(
            *kind, *v, *v_min, *v_max, *delta, *delta_min, *delta_max, *points,
            state.as_ref(), globals,
        ),
        Command::Selftest => selftest(meta),
    }
}

fn parse_floats(s: &str, expect: usize, what: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != expect {
        return Err(CliError::Usage(format!(
            "{what} needs {expect} comma-separated numbers, got {:?}",
            s
        )));
    }
    parts
        .iter()
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("{what}: `{p}` is not a number")))
        })
        .collect()
}

fn parse_vec3(s: &str, what: &str) -> Result<Vector3<f64>, CliError> {
    let v = parse_floats(s, 3, what)?;
    Ok(Vector3::new(v[0], v[1], v[2]))
}

fn parse_prior(s: &str) -> Result<BoostPrior, CliError> {
    let mut grid = Vec::new();
    for part in s.split(',') {
        let (v, w) = part
            .split_once(':')
            .ok_or_else(|| CliError::Usage(format!("prior entry `{part}` is not v:w")))?;
        let v = v
            .trim()
            .parse::<f64>()
            .map_err(|_| CliError::Usage(format!("prior speed `{v}` is not a number")))?;
        let w = w
            .trim()
            .parse::<f64>()
            .map_err(|_| CliError::Usage(format!("prior weight `{w}` is not a number")))?;
        grid.push((v, w));
    }
    Ok(BoostPrior::normalized(grid)?)
}

fn read_state(path: &Path, validate: bool) -> Result<StateJson, CliError> {
    Ok(relqi::qmath::io::read_state_file(path, validate)?)
}

fn read_pure(path: &Path, validate: bool, expect_dim: usize) -> Result<PureState, CliError> {
    match read_state(path, validate)? {
        StateJson::Pure(p) if p.dim() == expect_dim => Ok(p),
        StateJson::Pure(p) => Err(CliError::Core(Error::Shape(format!(
            "state file has dim {}, expected {expect_dim}",
            p.dim()
        )))),
        StateJson::Density(_) => Err(CliError::Core(Error::Shape(
            "expected a pure-state (column vector) file".into(),
        ))),
    }
}

fn read_density_or(
    path: Option<&PathBuf>,
    validate: bool,
    default: DensityMatrix,
) -> Result<DensityMatrix, CliError> {
    match path {
        None => Ok(default),
        Some(p) => {
            let st = read_state(p, validate)?;
            if st.dim() != default.dim() {
                return Err(CliError::Core(Error::Shape(format!(
                    "state file has dim {}, expected {}",
                    st.dim(),
                    default.dim()
                ))));
            }
            Ok(st.to_density())
        }
    }
}

fn density_value(dm: &DensityMatrix) -> Value {
    serde_json::to_value(MatrixJson::from_matrix(dm.matrix())).expect("matrix serializes")
}

fn pure_value(p: &PureState) -> Value {
    serde_json::to_value(state_to_json(&StateJson::Pure(p.clone()))).expect("state serializes")
}

fn plus_state() -> DensityMatrix {
    let amp = nalgebra::DVector::from_element(2, relqi::qmath::cr(std::f64::consts::FRAC_1_SQRT_2));
    PureState::new(amp).expect("|+> is normalized").to_density()
}

// ---------------------------------------------------------------- wigner

fn wigner(boost: &str, momentum: &str) -> Outcome {
    let v = parse_vec3(boost, "--boost")?;
    let p = parse_vec3(momentum, "--momentum")?;
    let lambda = boost_from_velocity(v)?;
    let rotation = wigner_rotation(&lambda, &FourVector::massive(p))?;
    let results = serde_json::to_value(rotation.to_json()).expect("wigner serializes");
    Ok((Payload::Json(results), Value::Null, 0))
}

// --------------------------------------------------------------- overlap

fn overlap_table(delta: f64, a_max: Option<f64>, points: usize, globals: &Globals) -> Outcome {
    if points == 0 {
        return Err(CliError::Usage("overlap needs at least one grid point".into()));
    }
    if points > 10_000 {
        return Err(CliError::Core(Error::Size(format!(
            "grid of {points} points exceeds the 10^4 cap"
        ))));
    }
    let packet = make_packet_with_nodes(delta, globals.quadrature_nodes)?;
    let a_max = a_max.unwrap_or(6.0 / delta);
    let mut csv = Csv::new(vec!["a", "delta", "overlap_re", "overlap_abs", "analytic_gaussian"]);
    for i in 0..points {
        let a = if points == 1 {
            0.0
        } else {
            a_max * i as f64 / (points - 1) as f64
        };
        let ov = overlap(&packet, a)?;
        csv.push(vec![
            fmt_f64(a),
            fmt_f64(delta),
            fmt_f64(ov.re),
            fmt_f64(ov.norm()),
            fmt_f64(analytic_gaussian_overlap(delta, a)),
        ]);
    }
    Ok((Payload::Csv(csv), Value::Null, 0))
}

// --------------------------------------------------------------- channel

fn channel_report(
    name: &str,
    params: Value,
    ch: &QuantumChannel,
    state: Option<&PathBuf>,
    globals: &Globals,
) -> Outcome {
    let input = read_density_or(
        state,
        !globals.no_validate,
        PureState::basis(1, 0).to_density(),
    )?;
    let report = choi_check(ch);
    let output = apply_channel(ch, &input)?;
    let results = json!({
        "channel": name,
        "params": params,
        "choi_defects": {
            "tp_defect": report.tp_defect,
            "min_choi_eig": report.min_choi_eig,
        },
        "input_state": density_value(&input),
        "output_state": density_value(&output),
        "fidelity_to_input": fidelity(&output, &input)?,
        "trace_distance_to_input": trace_distance(&output, &input)?,
    });
    let diagnostics = json!({ "kraus_count": ch.kraus_ops().len(), "choi_passes": report.passes() });
    Ok((Payload::Json(results), diagnostics, 0))
}

fn channel(kind: &ChannelCmd, globals: &Globals) -> Outcome {
    match kind {
        ChannelCmd::BoostApprox { v, delta, state } => {
            let g = gamma(*v, *delta)?;
            let ch = boost_channel_approx(&g)?;
            channel_report(
                "boost-approx",
                json!({"v": v, "delta": delta, "gamma": g.gamma}),
                &ch,
                state.as_ref(),
                globals,
            )
        }
        ChannelCmd::BoostExact { v, delta, state } => {
            let packet = make_packet_with_nodes(*delta, globals.quadrature_nodes)?;
            let ch = boost_channel_exact_with_nodes(*v, &packet, globals.quadrature_nodes)?;
            let g = gamma(*v, *delta)?;
            channel_report(
                "boost-exact",
                json!({
                    "v": v,
                    "delta": delta,
                    "gamma": g.gamma,
                    "nodes": globals.quadrature_nodes,
                }),
                &ch,
                state.as_ref(),
                globals,
            )
        }
        ChannelCmd::Mixture {
            prior,
            delta,
            state,
        } => {
            let prior = parse_prior(prior)?;
            let ch = boost_mixture(&prior, *delta)?;
            let grid: Vec<[f64; 2]> = prior.grid().iter().map(|&(v, w)| [v, w]).collect();
            channel_report(
                "mixture",
                json!({"prior": grid, "delta": delta}),
                &ch,
                state.as_ref(),
                globals,
            )
        }
    }
}

// ----------------------------------------------------------------- twirl

fn twirl(
    qubits: usize,
    method: MethodArg,
    samples: u64,
    state: Option<&PathBuf>,
    globals: &Globals,
) -> Outcome {
    if qubits == 0 || qubits > 8 {
        return Err(CliError::Core(Error::Size(format!(
            "twirl register size {qubits} outside 1..=8"
        ))));
    }
    let dim = 1usize << qubits;
    let input = read_density_or(
        state,
        !globals.no_validate,
        PureState::basis(qubits, 0).to_density(),
    )?;
    let tm = match method {
        MethodArg::Exact => TwirlMethod::Exact,
        MethodArg::Mc => TwirlMethod::MonteCarlo {
            samples,
            seed: globals.seed,
        },
    };
    let result: TwirlResult = if qubits == 1 {
        twirl_single(&input, tm)?
    } else {
        let basis = relqi::schur::schur_basis(qubits)?;
        collective_twirl(&input, &basis, tm)?
    };
    let (method_name, samples_field): (&str, Value) = match result.method {
        TwirlMethod::Exact => ("exact-projector", Value::Null),
        TwirlMethod::MonteCarlo { samples, .. } => ("monte-carlo", json!(samples)),
    };
    let results = json!({
        "qubits": qubits,
        "dim": dim,
        "method": method_name,
        "samples": samples_field,
        "stat_tol": result.stat_tol,
        "output_state": density_value(&result.output),
        "trace_distance_to_input": trace_distance(&result.output, &input)?,
    });
    Ok((Payload::Json(results), Value::Null, 0))
}

// ----------------------------------------------------------------- codec

fn codec(op: &CodecCmd, globals: &Globals) -> Outcome {
    match op {
        CodecCmd::Info { n, two_j, dim } => {
            let codec = make_codec(*n, *two_j, *dim)?;
            let results = json!({
                "n": codec.n(),
                "j": codec.two_j() as f64 / 2.0,
                "two_j": codec.two_j(),
                "logical_dim": codec.logical_dim(),
                "fiducial_two_m": codec.fiducial_two_m(),
                "isometry": serde_json::to_value(MatrixJson::from_matrix(codec.isometry()))
                    .expect("matrix serializes"),
            });
            Ok((Payload::Json(results), Value::Null, 0))
        }
        CodecCmd::Encode {
            n,
            two_j,
            dim,
            state,
            out,
        } => {
            let codec = make_codec(*n, *two_j, *dim)?;
            let logical = read_pure(state, !globals.no_validate, *dim)?;
            let physical = codec_encode(&codec, &logical)?;
            if let Some(path) = out {
                relqi::qmath::io::write_state_file(path, &StateJson::Pure(physical.clone()))?;
            }
            let results = json!({
                "physical_state": pure_value(&physical),
                "written": out.as_ref().map(|p| p.display().to_string()),
            });
            Ok((Payload::Json(results), Value::Null, 0))
        }
        CodecCmd::Decode {
            n,
            two_j,
            dim,
            state,
        } => {
            let codec = make_codec(*n, *two_j, *dim)?;
            let physical = read_pure(state, !globals.no_validate, 1usize << *n)?;
            let (logical, weight) = codec_decode(&codec, &physical)?;
            let results = json!({
                "logical_state": pure_value(&logical),
                "in_code_weight": weight,
            });
            Ok((Payload::Json(results), Value::Null, 0))
        }
    }
}

// ---------------------------------------------------------- multiplicity

fn multiplicity_table(n_max: usize) -> Outcome {
    if n_max == 0 {
        return Err(CliError::Usage("--n-max must be at least 1".into()));
    }
    if n_max > 30 {
        return Err(CliError::Core(Error::Size(format!(
            "--n-max {n_max} beyond the table cap 30"
        ))));
    }
    let mut csv = Csv::new(vec!["n", "j", "multiplicity", "dim_check"]);
    for n in 1..=n_max {
        let mut total: u128 = 0;
        let mut rows = Vec::new();
        let mut two_j = (n % 2) as u32;
        while two_j as usize <= n {
            let mult = multiplicity(n, two_j)?;
            total += (two_j as u128 + 1) * mult as u128;
            rows.push((two_j, mult));
            two_j += 2;
        }
        let check = if total == 1u128 << n { "ok" } else { "fail" };
        for (two_j, mult) in rows {
            let j = if two_j % 2 == 0 {
                format!("{}", two_j / 2)
            } else {
                format!("{}.5", two_j / 2)
            };
            csv.push(vec![n.to_string(), j, mult.to_string(), check.to_string()]);
        }
    }
    Ok((Payload::Csv(csv), Value::Null, 0))
}

// ---------------------------------------------------------------- photon

#[derive(Debug, Serialize, Deserialize)]
struct TwoPhotonJson {
    momentum: [f64; 4],
    /// Amplitudes over ++, +−, −+, −− as [re, im].
    amplitudes: Vec<[f64; 2]>,
}

impl TwoPhotonJson {
    fn from_state(s: &TwoPhotonState) -> Self {
        let p = s.momentum();
        TwoPhotonJson {
            momentum: [p.t, p.x, p.y, p.z],
            amplitudes: s.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
        }
    }

    fn to_state(&self) -> CoreResult<TwoPhotonState> {
        if self.amplitudes.len() != 4 {
            return Err(Error::Format("pair state needs 4 amplitudes".into()));
        }
        let p = FourVector::new(
            self.momentum[0],
            self.momentum[1],
            self.momentum[2],
            self.momentum[3],
        );
        let a: Vec<num_complex::Complex64> = self
            .amplitudes
            .iter()
            .map(|e| num_complex::Complex64::new(e[0], e[1]))
            .collect();
        TwoPhotonState::new(p, [a[0], a[1], a[2], a[3]])
    }
}

fn photon_lambda(rotate: Option<&String>, boost: Option<&String>) -> Result<LorentzElement, CliError> {
    let mut lambda = LorentzElement::identity();
    if let Some(r) = rotate {
        let v = parse_floats(r, 4, "--rotate")?;
        let rot = rotation_about(Vector3::new(v[0], v[1], v[2]), v[3])?;
        lambda = relqi::lorentz::compose(&rot, &lambda);
    }
    if let Some(b) = boost {
        let v = parse_vec3(b, "--boost")?;
        lambda = relqi::lorentz::compose(&boost_from_velocity(v)?, &lambda);
    }
    Ok(lambda)
}

fn photon(op: &PhotonCmd, globals: &Globals) -> Outcome {
    match op {
        PhotonCmd::Phase {
            rotate,
            boost,
            momentum,
        } => {
            let lambda = photon_lambda(rotate.as_ref(), boost.as_ref())?;
            let k = parse_vec3(momentum, "--momentum")?;
            let p = FourVector::massless(k)?;
            let lg = little_group_phase(&lambda, &p)?;
            let results = json!({
                "omega": lg.omega(),
                "beta": [lg.beta().re, lg.beta().im],
                "state": Value::Null,
            });
            let diagnostics = json!({
                "triangularity_defect": lg.sl2()[(1, 0)].norm(),
            });
            Ok((Payload::Json(results), diagnostics, 0))
        }
        PhotonCmd::Encode {
            state,
            momentum,
            out,
        } => {
            let logical = read_pure(state, !globals.no_validate, 2)?;
            let k = parse_vec3(momentum, "--momentum")?;
            let p = FourVector::massless(k)?;
            let pair = photon_codec_encode(&logical, &p)?;
            let doc = TwoPhotonJson::from_state(&pair);
            if let Some(path) = out {
                std::fs::write(path, serde_json::to_string_pretty(&doc).expect("pair serializes"))
                    .map_err(Error::Io)?;
            }
            let results = json!({
                "omega": Value::Null,
                "beta": Value::Null,
                "state": serde_json::to_value(&doc).expect("pair serializes"),
            });
            Ok((Payload::Json(results), Value::Null, 0))
        }
        PhotonCmd::Decode { pair } => {
            let text = std::fs::read_to_string(pair).map_err(Error::Io)?;
            let doc: TwoPhotonJson = serde_json::from_str(&text)
                .map_err(|e| Error::Format(format!("{pair:?}: {e}")))?;
            let state = doc.to_state()?;
            let logical = photon_codec_decode(&state)?;
            let results = json!({
                "logical_state": pure_value(&logical),
                "nonzero_helicity_weight": state.nonzero_helicity_weight(),
            });
            Ok((Payload::Json(results), Value::Null, 0))
        }
    }
}

// ----------------------------------------------------------------- sweep

#[allow(clippy::too_many_arguments)]
fn sweep(
    kind: SweepKind,
    v: Option<f64>,
    v_min: Option<f64>,
    v_max: Option<f64>,
    delta: Option<f64>,
    delta_min: Option<f64>,
    delta_max: Option<f64>,
    points: usize,
    state: Option<&PathBuf>,
    globals: &Globals,
) -> Outcome {
    if points == 0 {
        return Err(CliError::Usage("sweep needs at least one grid point".into()));
    }
    if points > 10_000 {
        return Err(CliError::Core(Error::Size(format!(
            "grid of {points} points exceeds the 10^4 cap"
        ))));
    }
    let input = read_density_or(state, !globals.no_validate, plus_state())?;
    match kind {
        SweepKind::V => {
            let (lo, hi, delta) = match (v_min, v_max, delta) {
                (Some(lo), Some(hi), Some(d)) => (lo, hi, d),
                _ => {
                    return Err(CliError::Usage(
                        "kind=v needs --v-min, --v-max and --delta".into(),
                    ))
                }
            };
            if !(lo <= hi) {
                return Err(CliError::Usage("empty range: v-min must not exceed v-max".into()));
            }
            let mut csv = Csv::new(vec!["v", "delta", "gamma", "fidelity_to_input", "trace_distance"]);
            for i in 0..points {
                let v = if points == 1 {
                    lo
                } else {
                    lo + (hi - lo) * i as f64 / (points - 1) as f64
                };
                let g = gamma(v, delta)?;
                let ch = boost_channel_approx(&g)?;
                let out = apply_channel(&ch, &input)?;
                csv.push(vec![
                    fmt_f64(v),
                    fmt_f64(delta),
                    fmt_f64(g.gamma),
                    fmt_f64(fidelity(&out, &input)?),
                    fmt_f64(trace_distance(&out, &input)?),
                ]);
            }
            Ok((Payload::Csv(csv), Value::Null, 0))
        }
        SweepKind::Delta => {
            let (lo, hi, v) = match (delta_min, delta_max, v) {
                (Some(lo), Some(hi), Some(v)) => (lo, hi, v),
                _ => {
                    return Err(CliError::Usage(
                        "kind=delta needs --delta-min, --delta-max and --v".into(),
                    ))
                }
            };
            if !(lo <= hi) || !(lo > 0.0) {
                return Err(CliError::Usage(
                    "empty range: need 0 < delta-min ≤ delta-max".into(),
                ));
            }
            let mut csv = Csv::new(vec![
                "v",
                "delta",
                "gamma",
                "fidelity_to_input",
                "trace_distance",
                "choi_exact_vs_approx",
            ]);
            for i in 0..points {
                // Geometric grid: halving behavior reads off directly.
                let delta = if points == 1 {
                    lo
                } else {
                    lo * (hi / lo).powf(i as f64 / (points - 1) as f64)
                };
                let g = gamma(v, delta)?;
                let approx = boost_channel_approx(&g)?;
                let packet = make_packet_with_nodes(delta, globals.quadrature_nodes)?;
                let exact = boost_channel_exact_with_nodes(v, &packet, globals.quadrature_nodes)?;
                let out = apply_channel(&approx, &input)?;
                let choi_gap = trace_distance(
                    &relqi::qmath::choi_state(&exact)?,
                    &relqi::qmath::choi_state(&approx)?,
                )?;
                csv.push(vec![
                    fmt_f64(v),
                    fmt_f64(delta),
                    fmt_f64(g.gamma),
                    fmt_f64(fidelity(&out, &input)?),
                    fmt_f64(trace_distance(&out, &input)?),
                    fmt_f64(choi_gap),
                ]);
            }
            Ok((Payload::Csv(csv), Value::Null, 0))
        }
    }
}

// -------------------------------------------------------------- selftest

#[allow(clippy::redundant_closure_call)] // named check bodies read best inline
fn selftest(meta: &Meta) -> Outcome {
    use rand::Rng;
    use relqi::qmath::rng::{haar_su2_sample, random_density, random_pure, substream};
    use relqi::qmath::{hermitian_eigen, identity, tensor_power};
    use relqi::schur::spin::{irrep_of_su2, total_spin_squared};
    use relqi::schur::{schur_basis, SchurBasis};

    let seed = meta.seed;
    let mut lines: Vec<String> = Vec::new();
    let mut failures = 0usize;
    let mut check = |name: &str, result: Result<(), String>| match result {
        Ok(()) => lines.push(format!("ok   {name}")),
        Err(msg) => {
            failures += 1;
            lines.push(format!("FAIL {name}: {msg}"));
        }
    };
    let core = |e: Error| e.to_string();

    check("haar-su2-unitarity", (|| {
        let mut rng = substream(seed, 1);
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let u = haar_su2_sample(&mut rng);
            let defect = (&u * u.adjoint() - identity(2))
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            worst = worst.max(defect);
        }
        if worst < 1e-12 {
            Ok(())
        } else {
            Err(format!("unitarity defect {worst:e}"))
        }
    })());

    check("rng-substream-determinism", (|| {
        let a: Vec<u64> = {
            let mut r = substream(seed, 2);
            (0..16).map(|_| r.gen()).collect()
        };
        let b: Vec<u64> = {
            let mut r = substream(seed, 2);
            (0..16).map(|_| r.gen()).collect()
        };
        if a == b {
            Ok(())
        } else {
            Err("substream not reproducible".to_string())
        }
    })());

    check("lorentz-invariants", (|| {
        let mut rng = substream(seed, 3);
        for _ in 0..50 {
            relqi::lorentz::random_element(&mut rng, 1.5)
                .check()
                .map_err(core)?;
        }
        Ok(())
    })());

    check("wigner-cocycle", (|| {
        let mut rng = substream(seed, 4);
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let l1 = relqi::lorentz::random_element(&mut rng, 1.2);
            let l2 = relqi::lorentz::random_element(&mut rng, 1.2);
            let p = FourVector::massive(Vector3::new(
                rng.gen::<f64>() - 0.5,
                rng.gen::<f64>() - 0.5,
                rng.gen::<f64>() - 0.5,
            ));
            let combined =
                wigner_rotation(&relqi::lorentz::compose(&l2, &l1), &p).map_err(core)?;
            let w1 = wigner_rotation(&l1, &p).map_err(core)?;
            let w2 = wigner_rotation(&l2, &relqi::lorentz::apply(&l1, &p)).map_err(core)?;
            let product =
                relqi::lorentz::WignerRotation::from_su2(w2.su2() * w1.su2()).map_err(core)?;
            let gap = (combined.rotation3() - product.rotation3())
                .iter()
                .map(|x| x.abs())
                .fold(0.0, f64::max);
            worst = worst.max(gap);
        }
        if worst < 1e-9 {
            Ok(())
        } else {
            Err(format!("cocycle defect {worst:e}"))
        }
    })());

    check("packet-normalization", (|| {
        let packet = make_packet_with_nodes(0.01, 32).map_err(core)?;
        let defect = packet.norm_defect(64);
        if defect < 1e-8 {
            Ok(())
        } else {
            Err(format!("norm defect {defect:e}"))
        }
    })());

    check("overlap-gaussian-form", (|| {
        let delta = 1e-3;
        let packet = make_packet_with_nodes(delta, 32).map_err(core)?;
        let ov = overlap(&packet, 4.0 / delta).map_err(core)?;
        let rel = (ov.re / (-4.0f64).exp() - 1.0).abs();
        if rel < 1e-3 {
            Ok(())
        } else {
            Err(format!("relative error {rel:e}"))
        }
    })());

    check("boost-channel-leading-order", (|| {
        let v = 0.5;
        let delta = 0.05;
        let packet = make_packet_with_nodes(delta, 16).map_err(core)?;
        let exact = boost_channel_exact_with_nodes(v, &packet, 16).map_err(core)?;
        let approx = boost_channel_approx(&gamma(v, delta).map_err(core)?).map_err(core)?;
        let gap = trace_distance(
            &relqi::qmath::choi_state(&exact).map_err(core)?,
            &relqi::qmath::choi_state(&approx).map_err(core)?,
        )
        .map_err(core)?;
        if gap <= 1e-4 {
            Ok(())
        } else {
            Err(format!("Choi gap {gap:e}"))
        }
    })());

    check("single-qubit-twirl", (|| {
        let mut rng = substream(seed, 5);
        let mixed = DensityMatrix::maximally_mixed(2);
        for _ in 0..20 {
            let rho = random_density(2, 2, &mut rng);
            let out = twirl_single(&rho, TwirlMethod::Exact).map_err(core)?;
            let d = trace_distance(&out.output, &mixed).map_err(core)?;
            if d > 1e-12 {
                return Err(format!("exact twirl distance {d:e}"));
            }
        }
        let mc = twirl_single(
            &PureState::basis(1, 0).to_density(),
            TwirlMethod::MonteCarlo {
                samples: 20_000,
                seed,
            },
        )
        .map_err(core)?;
        let d = trace_distance(&mc.output, &mixed).map_err(core)?;
        if d <= mc.stat_tol.unwrap_or(0.0) {
            Ok(())
        } else {
            Err(format!("MC twirl distance {d:e}"))
        }
    })());

    check("schur-block-structure", (|| {
        let mut rng = substream(seed, 6);
        for n in 2..=4usize {
            let basis: SchurBasis = schur_basis(n).map_err(core)?;
            let u = haar_su2_sample(&mut rng);
            let big = tensor_power(&u, n).map_err(core)?;
            let conj = basis.to_schur(&big);
            for span in basis.sectors() {
                let d = irrep_of_su2(span.two_j, &u).map_err(core)?;
                for mr in 0..span.dim_r {
                    for mc in 0..span.dim_r {
                        for pi in 0..span.multiplicity {
                            let r = span.row_start + mr * span.multiplicity + pi;
                            let cc = span.row_start + mc * span.multiplicity + pi;
                            if (conj[(r, cc)] - d[(mr, mc)]).norm() > 1e-9 {
                                return Err(format!("block defect at n={n}"));
                            }
                        }
                    }
                }
            }
            let jsq = total_spin_squared(n).map_err(core)?;
            let diag = basis.to_schur(&jsq);
            for (r, label) in basis.rows().iter().enumerate() {
                let j = label.two_j as f64 / 2.0;
                if (diag[(r, r)].re - j * (j + 1.0)).abs() > 1e-9 {
                    return Err(format!("J² eigenvalue defect at n={n}"));
                }
            }
        }
        Ok(())
    })());

    check("codec-twirl-invariance", (|| {
        let mut rng = substream(seed, 7);
        let codec = make_codec(4, 0, 2).map_err(core)?;
        let basis = schur_basis(4).map_err(core)?;
        for _ in 0..10 {
            let logical = random_pure(2, &mut rng);
            let physical = codec_encode(&codec, &logical).map_err(core)?;
            let twirled = collective_twirl(&physical.to_density(), &basis, TwirlMethod::Exact)
                .map_err(core)?;
            let f = fidelity(&twirled.output, &physical.to_density()).map_err(core)?;
            if f < 1.0 - 1e-12 {
                return Err(format!("encoded state moved: F = {f}"));
            }
        }
        Ok(())
    })());

    check("photon-invariance", (|| {
        let mut rng = substream(seed, 8);
        let p = FourVector::new(1.0, 0.0, 0.0, 1.0);
        for _ in 0..50 {
            let logical = random_pure(2, &mut rng);
            let encoded = photon_codec_encode(&logical, &p).map_err(core)?;
            let lambda = relqi::lorentz::random_element(&mut rng, 1.2);
            let moved = relqi::photon::apply_lorentz_pair(&lambda, &encoded).map_err(core)?;
            let back = photon_codec_decode(&moved).map_err(core)?;
            if back.fidelity_with(&logical) < 1.0 - 1e-12 {
                return Err("photon code not invariant".to_string());
            }
        }
        Ok(())
    })());

    check("multiplicity-vs-spectrum", (|| {
        for n in 2..=5usize {
            let jsq = total_spin_squared(n).map_err(core)?;
            let (vals, _) = hermitian_eigen(&jsq);
            let mut two_j = (n % 2) as u32;
            while two_j as usize <= n {
                let j = two_j as f64 / 2.0;
                let target = j * (j + 1.0);
                let count = vals.iter().filter(|&&x| (x - target).abs() < 1e-6).count();
                let expect =
                    (two_j as usize + 1) * multiplicity(n, two_j).map_err(core)? as usize;
                if count != expect {
                    return Err(format!("eigencount mismatch at (n={n}, 2j={two_j})"));
                }
                two_j += 2;
            }
        }
        Ok(())
    })());

    let mut text = lines.join("\n");
    text.push('\n');
    text.push_str(&format!(
        "selftest: {} checks, {} failed\n",
        lines.len(),
        failures
    ));
    let code = if failures == 0 { 0 } else { 3 };
    Ok((Payload::Text(text), Value::Null, code))
}
