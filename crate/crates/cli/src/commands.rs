use std::f64::consts::PI;

use serde_json::{json, Map, Value};
use unruh_core::dynamics::{evolve_state, Evolution, MapTrajectory, QubitState};
use unruh_core::information::{
    blp_sample, distinguishability, fine_evolution, gamma2_threshold_scan, helstrom_curve, info_flow, max_increase,
    trace_distance, HelstromInput,
};
use unruh_core::numerics::QuadratureSpec;
use unruh_core::positivity::{cp_check, cp_threshold_scan, reversed_path_check};
use unruh_core::rates::{gamma3_closed_form, RateTable, TableOptions, TimeScale};
use unruh_core::worldline::{IntervalConvention, Worldline};

use crate::error::CliError;
use crate::output::{Columns, Report};
use crate::{
    Axis, BackflowArgs, Command, Common, Convention, CpArgs, EvolveArgs, InputChoice, RatesArgs, ReversedArgs, Scale,
    ScanArgs, Target,
};

const DEFAULT_TAU_MAX: f64 = 15.0;
const DEFAULT_SAMPLES: usize = 241;

pub fn describe(command: &str) -> &'static str {
    match command {
        "rates" => "\
taubar            scaled proper time since the switch-on
g1, g2, g3        absorption, emission and dephasing rates, as pi*alpha*gamma_i
g3_closed_form    closed-form dephasing rate for comparison with g3
delta_fdot_plus   transient correction to 2*pi*alpha*Fdot at +wbar
delta_fdot_minus  same at -wbar
tau, gamma1..3    (--physical) tau = alpha*taubar, gamma_i = g_i/(pi*alpha)
",
        "cp" => "\
taubar   scaled proper time
Gamma    accumulated decay exponent
G        accumulated feed term
P0       ground population starting from the ground state
P1       ground population starting from the excited state
tau      (--physical) alpha*taubar
summary: verdict (Satisfied/Violated/Indeterminate), min_p0, argmin_taubar, max_p1
",
        "scan" => "\
JSON fields: threshold, bracket_lo, bracket_hi, resolution, min_witness,
argmin_taubar, omegabar_grid and the witness sampled on that grid.
",
        "evolve" => "\
taubar      scaled proper time
x, y, z     Bloch components
p_excited   excited-state population (1 + z)/2
p_ground    ground-state population (1 - z)/2
tau         (--physical) alpha*taubar
",
        "backflow" => "\
taubar    scaled proper time
E         trace norm of the evolved system-ancilla Helstrom matrix
D         trace distance of the evolved antipodal pair
sigma     dD/dtaubar
P_D       success probability (1 + D)/2
tau       (--physical) alpha*taubar
summary: blp_measure and its witness pair, helstrom_max_increase
",
        "reversed" => "\
taubar  probe time on the decelerating path
p0      ground population starting from the ground state
p1      ground population starting from the excited state
summary: convention, taubar_start, all_negative, earliest_magnitude
",
        _ => "",
    }
}

pub fn execute(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Rates(a) => rates(a),
        Command::Cp(a) => cp(a),
        Command::Scan(a) => scan(a),
        Command::Evolve(a) => evolve(a),
        Command::Backflow(a) => backflow(a),
        Command::Reversed(a) => reversed(a),
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn validate(c: &Common) -> Result<(), CliError> {
    if !(c.alpha > 0.0 && c.alpha.is_finite()) {
        return Err(usage(format!("--alpha must be positive, got {}", c.alpha)));
    }
    if let Some(t) = c.tau_max {
        if !(t > 0.0 && t.is_finite()) {
            return Err(usage(format!("--tau-max must be positive, got {t}")));
        }
    }
    if matches!(c.samples, Some(n) if n < 16) {
        return Err(usage("--samples must be at least 16"));
    }
    if !(c.abs_tol > 0.0 && c.rel_tol > 0.0) {
        return Err(usage("tolerances must be positive"));
    }
    Ok(())
}

fn omegabar(c: &Common) -> Result<f64, CliError> {
    let w = match (c.wbar, c.omega) {
        (Some(_), Some(_)) => return Err(usage("give either --wbar or --omega, not both")),
        (Some(w), None) => w,
        (None, Some(w)) => w * c.alpha,
        (None, None) => return Err(usage("missing --wbar (or --omega with --alpha)")),
    };
    if !w.is_finite() {
        return Err(usage("the gap must be finite"));
    }
    Ok(w)
}

fn options(c: &Common) -> TableOptions {
    TableOptions {
        taubar_max: c.tau_max.unwrap_or(DEFAULT_TAU_MAX),
        samples: c.samples.unwrap_or(DEFAULT_SAMPLES),
        quad: QuadratureSpec::with_tolerances(c.abs_tol, c.rel_tol),
        time_scale: match c.time_scale {
            Scale::Transition => TimeScale::Transition,
            Scale::Physical => TimeScale::Physical,
        },
        markovian_baseline: c.markovian_baseline,
    }
}

fn echo<T: serde::Serialize>(args: &T, omegabar: Option<f64>) -> Value {
    let mut v = serde_json::to_value(args).unwrap_or(Value::Null);
    if let (Value::Object(m), Some(w)) = (&mut v, omegabar) {
        m.insert("omegabar".into(), json!(w));
    }
    v
}

fn uniform(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect()
}

fn summary(pairs: Vec<(&str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn with_tau(mut names: Vec<&'static str>, rows: &mut [Vec<f64>], c: &Common) -> Vec<&'static str> {
    if c.physical {
        names.push("tau");
        for r in rows.iter_mut() {
            r.push(r[0] * c.alpha);
        }
    }
    names
}

fn rates(a: &RatesArgs) -> Result<Report, CliError> {
    let c = &a.common;
    validate(c)?;
    let w = omegabar(c)?;
    let opts = options(c);
    let mut params = opts.params(w, Worldline::switch_on());
    params.dephasing_only = a.dephasing_only;
    let table = RateTable::build(params, opts.taubar_max, opts.samples)?;
    let mut rows: Vec<Vec<f64>> = table
        .samples()
        .iter()
        .map(|s| {
            let t = s.triple;
            vec![t.taubar, t.g1, t.g2, t.g3, gamma3_closed_form(t.taubar), s.delta_plus, s.delta_minus]
        })
        .collect();
    let mut names =
        vec!["taubar", "g1", "g2", "g3", "g3_closed_form", "delta_fdot_plus", "delta_fdot_minus"];
    if c.physical {
        names.extend(["tau", "gamma1", "gamma2", "gamma3"]);
        for r in rows.iter_mut() {
            let k = 1.0 / (PI * c.alpha);
            let extra = [r[0] * c.alpha, r[1] * k, r[2] * k, r[3] * k];
            r.extend(extra);
        }
    }
    let min_of = |i: usize| rows.iter().map(|r| r[i]).fold(f64::INFINITY, f64::min);
    let argmin_g2 = rows.iter().min_by(|x, y| x[2].total_cmp(&y[2])).map_or(0.0, |r| r[0]);
    let s = summary(vec![
        ("omegabar", json!(w)),
        ("min_g1", json!(min_of(1))),
        ("min_g2", json!(min_of(2))),
        ("min_g3", json!(min_of(3))),
        ("argmin_g2_taubar", json!(argmin_g2)),
    ]);
    Ok(Report { command: "rates", config: echo(a, Some(w)), summary: s, columns: Some(Columns { names, rows }) })
}

fn cp(a: &CpArgs) -> Result<Report, CliError> {
    let c = &a.common;
    validate(c)?;
    let w = omegabar(c)?;
    let table = options(c).build(w, Worldline::switch_on())?;
    let r = cp_check(&table)?;
    let k = &r.curves;
    let mut rows: Vec<Vec<f64>> =
        (0..k.grid.len()).map(|i| vec![k.grid[i], k.decay[i], k.feed[i], k.p0[i], k.p1[i]]).collect();
    let names = with_tau(vec!["taubar", "Gamma", "G", "P0", "P1"], &mut rows, c);
    let s = summary(vec![
        ("omegabar", json!(w)),
        ("verdict", json!(r.verdict)),
        ("min_p0", json!(k.min_p0)),
        ("argmin_taubar", json!(k.argmin_taubar)),
        ("max_p1", json!(k.max_p1)),
    ]);
    Ok(Report { command: "cp", config: echo(a, Some(w)), summary: s, columns: Some(Columns { names, rows }) })
}

fn scan(a: &ScanArgs) -> Result<Report, CliError> {
    let c = &a.common;
    validate(c)?;
    if c.wbar.is_some() || c.omega.is_some() {
        return Err(usage("scan takes --wbar-min/--wbar-max, not --wbar"));
    }
    let lo = a.wbar_min.unwrap_or(match a.target {
        Target::Cp => 1.2,
        Target::Gamma2 => 0.5,
    });
    let hi = a.wbar_max.unwrap_or(2.0);
    let opts = options(c);
    let s = match a.target {
        Target::Cp => {
            let r = cp_threshold_scan((lo, hi), a.resolution, &opts)?;
            summary(vec![
                ("target", json!("cp")),
                ("threshold", json!(r.threshold)),
                ("bracket_lo", json!(r.bracket_lo)),
                ("bracket_hi", json!(r.bracket_hi)),
                ("resolution", json!(r.resolution)),
                ("min_witness", json!(r.min_witness)),
                ("argmin_taubar", json!(r.argmin_taubar)),
                ("omegabar_grid", json!(r.omegabar_grid)),
                ("witness_on_grid", json!(r.min_p0)),
            ])
        }
        Target::Gamma2 => {
            let r = gamma2_threshold_scan((lo, hi), a.resolution, &opts.quad)?;
            summary(vec![
                ("target", json!("gamma2")),
                ("threshold", json!(r.threshold)),
                ("bracket_lo", json!(r.bracket_lo)),
                ("bracket_hi", json!(r.bracket_hi)),
                ("resolution", json!(r.resolution)),
                ("min_witness", json!(r.min_witness)),
                ("argmin_taubar", json!(r.argmin_taubar)),
                ("omegabar_grid", json!(r.omegabar_grid)),
                ("witness_on_grid", json!(r.min_g2)),
            ])
        }
    };
    Ok(Report { command: "scan", config: echo(a, None), summary: s, columns: None })
}

pub(crate) fn parse_init(spec: &str) -> Result<QubitState, CliError> {
    let spec = spec.trim();
    match spec {
        "ground" => return Ok(QubitState::ground()),
        "excited" => return Ok(QubitState::excited()),
        _ => {}
    }
    let mut r = [0.0; 3];
    for part in spec.split(',') {
        let (k, v) = part.split_once('=').ok_or_else(|| usage(format!("bad --init component `{part}`")))?;
        let i = match k.trim() {
            "x" => 0,
            "y" => 1,
            "z" => 2,
            other => return Err(usage(format!("unknown Bloch component `{other}`"))),
        };
        r[i] = v.trim().parse::<f64>().map_err(|_| usage(format!("bad number `{v}` in --init")))?;
    }
    let s = QubitState::new(r[0], r[1], r[2]);
    if !s.is_physical(1e-12) {
        return Err(usage(format!("--init {spec} lies outside the Bloch ball")));
    }
    Ok(s)
}

fn evolve(a: &EvolveArgs) -> Result<Report, CliError> {
    let c = &a.common;
    validate(c)?;
    let w = omegabar(c)?;
    let rho0 = parse_init(&a.init)?;
    let table = options(c).build(w, Worldline::switch_on())?;
    let span = table.span();
    let ev = Evolution { hamiltonian: a.hamiltonian, ..Evolution::default() };
    let traj = evolve_state(rho0, &table, span, &ev)?;
    let grid = uniform(span.0, span.1, c.samples.unwrap_or(DEFAULT_SAMPLES));
    let mut rows: Vec<Vec<f64>> = grid
        .iter()
        .map(|&t| {
            let [x, y, z] = traj.at(t).bloch;
            vec![t, x, y, z, 0.5 * (1.0 + z), 0.5 * (1.0 - z)]
        })
        .collect();
    let pg: Vec<f64> = rows.iter().map(|r| r[5]).collect();
    let max_norm = rows.iter().map(|r| (r[1] * r[1] + r[2] * r[2] + r[3] * r[3]).sqrt()).fold(0.0, f64::max);
    let names = with_tau(vec!["taubar", "x", "y", "z", "p_excited", "p_ground"], &mut rows, c);
    let s = summary(vec![
        ("omegabar", json!(w)),
        ("min_p_ground", json!(pg.iter().cloned().fold(f64::INFINITY, f64::min))),
        ("max_p_ground", json!(pg.iter().cloned().fold(f64::NEG_INFINITY, f64::max))),
        ("max_bloch_norm", json!(max_norm)),
    ]);
    Ok(Report { command: "evolve", config: echo(a, Some(w)), summary: s, columns: Some(Columns { names, rows }) })
}

fn backflow(a: &BackflowArgs) -> Result<Report, CliError> {
    let c = &a.common;
    validate(c)?;
    let w = omegabar(c)?;
    if a.pairs == 0 {
        return Err(usage("--pairs must be at least 1"));
    }
    let table = options(c).build(w, Worldline::switch_on())?;
    let span = table.span();
    let maps = MapTrajectory::solve(&table, &fine_evolution(a.hamiltonian))?;
    let grid = uniform(span.0, span.1, c.samples.unwrap_or(DEFAULT_SAMPLES));
    let input = match a.input {
        InputChoice::Bell => HelstromInput::bell_pair(),
        InputChoice::Shifted => HelstromInput::shifted_pair(),
        InputChoice::Flagged => HelstromInput::flagged_excited(),
    };
    let e = helstrom_curve(&input, &maps, &grid);
    let axis = match a.pair {
        Axis::X => [1.0, 0.0, 0.0],
        Axis::Y => [0.0, 1.0, 0.0],
        Axis::Z => [0.0, 0.0, 1.0],
    };
    let (p, q) = (QubitState { bloch: axis }, QubitState { bloch: axis.map(|v| -v) });
    let dist = |t: f64| {
        let m = maps.at(t.clamp(span.0, span.1));
        trace_distance(&m.apply(&p), &m.apply(&q))
    };
    let mut rows: Vec<Vec<f64>> = grid
        .iter()
        .zip(&e)
        .map(|(&t, &ev)| {
            let d = dist(t);
            vec![t, ev, d, info_flow(dist, t, span), distinguishability(d)]
        })
        .collect();
    let names = with_tau(vec!["taubar", "E", "D", "sigma", "P_D"], &mut rows, c);
    let blp = blp_sample(&table, a.pairs, c.seed, a.hamiltonian)?;
    let (inc, at) = max_increase(&grid, &e);
    let s = summary(vec![
        ("omegabar", json!(w)),
        ("ancilla_dim", json!(input.ancilla_dim())),
        ("helstrom_max_increase", json!(inc)),
        ("helstrom_increase_taubar", json!(at)),
        ("blp_measure", json!(blp.measure)),
        ("blp_witness", json!(blp.witness)),
        ("blp_pairs", json!(blp.pairs)),
    ]);
    Ok(Report { command: "backflow", config: echo(a, Some(w)), summary: s, columns: Some(Columns { names, rows }) })
}

fn reversed(a: &ReversedArgs) -> Result<Report, CliError> {
    let c = &a.common;
    validate(c)?;
    let w = omegabar(c)?;
    let probes = a
        .probes
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| usage(format!("bad probe `{p}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    let conv = match a.convention {
        Convention::Literal => IntervalConvention::Literal,
        Convention::Timelike => IntervalConvention::TimelikeNegative,
    };
    let r = reversed_path_check(w, &probes, conv, &options(c))?;
    let mut rows: Vec<Vec<f64>> = r.probes.iter().map(|p| vec![p.taubar, p.p0, p.p1]).collect();
    let names = with_tau(vec!["taubar", "p0", "p1"], &mut rows, c);
    let s = summary(vec![
        ("omegabar", json!(w)),
        ("convention", json!(r.convention)),
        ("taubar_start", json!(r.taubar_start)),
        ("all_negative", json!(r.all_negative)),
        ("earliest_magnitude", json!(r.earliest_magnitude)),
    ]);
    Ok(Report { command: "reversed", config: echo(a, Some(w)), summary: s, columns: Some(Columns { names, rows }) })
}
