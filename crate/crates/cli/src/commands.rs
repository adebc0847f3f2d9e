use std::f64::consts::PI;

use dpsfield::checks::{run_suite, Suite};
use dpsfield::{
    continuum_moller_reduced, continuum_yukawa, continuum_yukawa_oracle, coulomb_even, coulomb_quadrature, g_sharp,
    gamma_set, moller_reduced_element, v_sharp, w_sharp, yukawa_coincidence, Complex64, GammaSet64, GridIndex,
    MollerKinematics64, MomentumVec64, Spin, VertexTruncation,
};
use rayon::prelude::*;

use crate::table::{format_float, Cell, Table};
use crate::{Failure, RunConfig, XMap};

impl XMap {
    pub fn apply(self, n: usize) -> f64 {
        match self {
            XMap::Index => n as f64,
            XMap::Sqrt2n1 => ((2 * n + 1) as f64).sqrt(),
        }
    }
}

fn collect<T: Send>(rows: Vec<dpsfield::Result<T>>) -> Result<Vec<T>, Failure> {
    rows.into_iter().map(|r| r.map_err(Failure::from)).collect()
}

/// `W#(n¹; μ)` and `V#(n¹; μ)` for `n¹ = 0..=n_max` next to the continuum potential.
pub fn cmd_yukawa(rc: &RunConfig) -> Result<Table, Failure> {
    let cfg = rc.quadrature();
    let rows = collect(
        (0..=rc.n_max)
            .into_par_iter()
            .map(|n| Ok((w_sharp(n, rc.mu, &cfg)?, v_sharp(n, rc.mu, rc.g, &cfg)?)))
            .collect(),
    )?;
    let closed = yukawa_coincidence(rc.mu)?;
    let mut t = Table::new(vec![
        "n1",
        "x",
        "w_sharp",
        "w_sharp_err",
        "v_sharp",
        "v_sharp_err",
        "v_continuum",
        "v_continuum_err",
        "coincidence_closed_form",
        "coincidence_closed_form_err",
    ]);
    rc.echo(&mut t);
    t.meta("coincidence_closed_form", format_float(closed));
    for (n, (w, v)) in rows.into_iter().enumerate() {
        let x = rc.x_map.apply(n);
        let cont = if x > 0.0 {
            continuum_yukawa(x, rc.mu, rc.g)?
        } else {
            f64::NEG_INFINITY
        };
        let (cf, cf_err) = if n == 0 {
            (Cell::Float(closed), Cell::Float(0.0))
        } else {
            (Cell::Empty, Cell::Empty)
        };
        t.push(vec![
            n.into(),
            x.into(),
            w.value.into(),
            w.err_estimate.into(),
            v.value.into(),
            v.err_estimate.into(),
            cont.into(),
            0.0.into(),
            cf,
            cf_err,
        ]);
    }
    Ok(t)
}

/// Non-singular Coulomb family `W#(2n¹; 0)` against `1/(4π|x|)`, under both x mappings.
pub fn cmd_coulomb(rc: &RunConfig) -> Result<Table, Failure> {
    let cfg = rc.quadrature();
    let quad = collect(
        (0..=rc.n_max)
            .into_par_iter()
            .map(|h| coulomb_quadrature::<f64>(2 * h, &cfg))
            .collect(),
    )?;
    let mut t = Table::new(vec![
        "n1",
        "x_index",
        "x_sqrt2n1",
        "x",
        "w_sharp",
        "w_sharp_err",
        "w_quadrature",
        "w_quadrature_err",
        "w_continuum",
        "four_pi_w_continuum",
    ]);
    rc.echo(&mut t);
    t.meta("w_continuum", "1/(4*pi*x) at x = column x");
    t.meta("four_pi_w_continuum", "1/x at x = column x");
    for (h, q) in quad.into_iter().enumerate() {
        let n = 2 * h;
        let x = rc.x_map.apply(n);
        let (wc, w4) = if x > 0.0 {
            (1.0 / (4.0 * PI * x), 1.0 / x)
        } else {
            (f64::INFINITY, f64::INFINITY)
        };
        t.push(vec![
            n.into(),
            XMap::Index.apply(n).into(),
            XMap::Sqrt2n1.apply(n).into(),
            x.into(),
            coulomb_even::<f64>(h).into(),
            0.0.into(),
            q.value.re.into(),
            q.err_estimate.into(),
            wc.into(),
            w4.into(),
        ]);
    }
    Ok(t)
}

/// A gnuplot script plotting the coulomb table stored at `data`.
pub fn gnuplot_script(data: &str, format: crate::table::Format) -> String {
    let sep = match format {
        crate::table::Format::Csv => "','",
        crate::table::Format::Tsv => "'\\t'",
    };
    format!(
        "set datafile separator {sep}\n\
         set datafile commentschars '#'\n\
         set key autotitle columnhead\n\
         set xlabel 'x'\n\
         set ylabel 'W'\n\
         set logscale y\n\
         plot '{data}' using 4:5 with linespoints title 'discrete W#(2n,0)', \\\n\
         \x20    '{data}' using 4:9 with lines title '1/(4 pi x)', \\\n\
         \x20    '{data}' using 4:10 with lines title '1/x'\n"
    )
}

/// Continuum Yukawa potential: closed form against the oscillatory-integral oracle.
pub fn cmd_continuum(rc: &RunConfig) -> Result<Table, Failure> {
    if !(rc.mu > 0.0) {
        return Err(Failure::Usage(format!(
            "invalid value for --mu: {} (accepted range for continuum: mu > 0)",
            rc.mu
        )));
    }
    let cfg = rc.quadrature();
    let points: Vec<(usize, f64)> = (0..=rc.n_max)
        .map(|n| (n, rc.x_map.apply(n)))
        .filter(|&(_, r)| r > 0.0)
        .collect();
    let oracle = collect(
        points
            .par_iter()
            .map(|&(_, r)| continuum_yukawa_oracle(r, rc.mu, &cfg))
            .collect(),
    )?;
    let mut t = Table::new(vec![
        "n1",
        "r",
        "v_closed_form",
        "v_closed_form_err",
        "v_oracle",
        "v_oracle_err",
    ]);
    rc.echo(&mut t);
    let g2 = rc.g * rc.g;
    for (&(n, r), o) in points.iter().zip(oracle) {
        t.push(vec![
            n.into(),
            r.into(),
            continuum_yukawa(r, rc.mu, rc.g)?.into(),
            0.0.into(),
            (g2 * o.value).into(),
            (g2 * o.err_estimate).into(),
        ]);
    }
    Ok(t)
}

/// `G#(n, n̂; μ)` for every pair in the box `[0, n_max]³ × [0, n_max]³`.
pub fn cmd_greens(rc: &RunConfig) -> Result<Table, Failure> {
    let cfg = rc.quadrature();
    let side = rc.n_max + 1;
    let pts: Vec<GridIndex> = (0..side)
        .flat_map(|a| (0..side).flat_map(move |b| (0..side).map(move |c| GridIndex::new(a, b, c))))
        .collect();
    let pairs: Vec<(GridIndex, GridIndex)> = pts.iter().flat_map(|&n| pts.iter().map(move |&m| (n, m))).collect();
    let values = collect(pairs.par_iter().map(|&(n, m)| g_sharp(n, m, rc.mu, &cfg)).collect())?;
    let mut t = Table::new(vec!["n1", "n2", "n3", "nh1", "nh2", "nh3", "re", "im", "err_estimate"]);
    rc.echo(&mut t);
    for ((n, m), v) in pairs.iter().zip(values) {
        let mut row: Vec<Cell> = n.0.iter().chain(m.0.iter()).map(|&i| Cell::from(i)).collect();
        row.extend([v.value.re.into(), v.value.im.into(), v.err_estimate.into()]);
        t.push(row);
    }
    Ok(t)
}

/// Kinematic flags of the `moller` command.
#[derive(Debug, Clone, Copy)]
pub struct MollerFlags {
    pub p1: [f64; 3],
    pub p2: [f64; 3],
    pub p1_out: [f64; 3],
    pub p2_out: [f64; 3],
    pub spins: [u8; 4],
}

fn vec3(p: [f64; 3]) -> MomentumVec64 {
    MomentumVec64::new(p[0], p[1], p[2])
}

/// Discrete second-order Møller reduced element with diagnostics and its continuum counterpart.
pub fn cmd_moller(rc: &RunConfig, flags: &MollerFlags) -> Result<Table, Failure> {
    let mut spins = [Spin::Up; 4];
    for (s, &label) in spins.iter_mut().zip(&flags.spins) {
        *s = Spin::new(label)
            .map_err(|_| Failure::Usage(format!("invalid value for --spins: {label} (accepted values: 1 or 2)")))?;
    }
    let kin = MollerKinematics64 {
        p1: vec3(flags.p1),
        p2: vec3(flags.p2),
        p1_out: vec3(flags.p1_out),
        p2_out: vec3(flags.p2_out),
        m: rc.m,
        mu: rc.mu,
        g: rc.g,
        spins,
    };
    let trunc = VertexTruncation::new(rc.n_max)?;
    let el = moller_reduced_element(&kin, trunc, &rc.quadrature())?;
    let (cont, note): (Complex64, &str) = match continuum_moller_reduced(&kin) {
        Ok(v) => (v, "finite"),
        Err(dpsfield::Error::Domain { .. }) => (Complex64::new(f64::INFINITY, 0.0), "diverges at q = 0 and mu = 0"),
        Err(e) => return Err(e.into()),
    };
    let mut t = Table::new(vec![
        "discrete_re",
        "discrete_im",
        "err_estimate",
        "truncation_tail",
        "truncation_warning",
        "continuum_re",
        "continuum_im",
        "continuum_err",
        "conservation_defect",
        "low_momentum_valid",
    ]);
    rc.echo(&mut t);
    for (k, p) in [
        ("p1", flags.p1),
        ("p2", flags.p2),
        ("p1_out", flags.p1_out),
        ("p2_out", flags.p2_out),
    ] {
        t.meta(k, p.map(format_float).join(","));
    }
    let s = flags.spins;
    t.meta("spins", format!("{},{},{},{}", s[0], s[1], s[2], s[3]));
    t.meta("continuum", note);
    t.push(vec![
        el.value.re.into(),
        el.value.im.into(),
        el.err_estimate.into(),
        el.truncation_tail.into(),
        el.truncation_warning.into(),
        cont.re.into(),
        cont.im.into(),
        0.0.into(),
        el.conservation_defect.into(),
        el.low_momentum_valid.into(),
    ]);
    Ok(t)
}

/// Gamma matrices with one entry of `γ¹` overwritten; a negative control for `check`.
pub fn corrupted_gammas() -> GammaSet64 {
    let mut m = *gamma_set::<f64>().matrices();
    m[0].0[0][3] = Complex64::new(2.0, 0.0);
    GammaSet64::from_matrices(m)
}

/// Runs a check suite. The table lists every check; failures are returned alongside.
pub fn cmd_check(rc: &RunConfig, suite: Suite, corrupt_gamma: bool) -> (Table, Vec<String>) {
    let gammas = if corrupt_gamma { corrupted_gammas() } else { gamma_set() };
    let report = run_suite(suite, &gammas, &rc.quadrature());
    let mut t = Table::new(vec!["check", "tolerance", "observed", "status", "note"]);
    rc.echo(&mut t);
    t.meta("suite", format!("{suite:?}").to_lowercase());
    if corrupt_gamma {
        t.meta("gamma_matrices", "corrupted");
    }
    for o in &report.outcomes {
        let status = if o.passed { "pass" } else { "FAIL" };
        t.push(vec![
            o.name.into(),
            o.tolerance.into(),
            o.observed.into(),
            status.into(),
            Cell::Text(o.note.replace([',', '\t', '\n'], ";")),
        ]);
    }
    let failures = report
        .failures()
        .map(|o| {
            let mut line = format!(
                "{}: observed {:e} exceeds tolerance {:e}",
                o.name, o.observed, o.tolerance
            );
            if !o.note.is_empty() {
                line.push_str(&format!(" ({})", o.note));
            }
            line
        })
        .collect();
    (t, failures)
}
