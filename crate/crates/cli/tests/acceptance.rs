//! Acceptance criteria, one `PASS`/`FAIL` line each.
//!
//! Oracles are written out here rather than borrowed from the library where a
//! short independent computation exists: Hermite functions by their own
//! recurrence, the gamma matrices as integer tables, `Γ(−1/2, x)` and the
//! Yukawa coincidence value by composite quadrature of their integrals, and
//! the Coulomb family from log-factorials.
//!
//! Criterion 3b cannot hold for the exact function: at `μ = 10⁻³` the
//! coincidence value is `2 − 2√π·μ + O(μ²) ≈ 1.996459`, which is `3.5·10⁻³`
//! from 2. It is printed as `FAIL` and does not abort the run; every other
//! failure does.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use dpsfield::{
    continuum_yukawa_oracle, coulomb_even, coulomb_quadrature, dirac_mode_residual, g_sharp, g_sharp_axis,
    hermite_function, incomplete_gamma_neg_half, low_momentum_u, moller_oracle, moller_reduced_element, spinor_u,
    spinor_v, yukawa_coincidence, Complex64, GammaSet64, GaussHermite, GreensTable, GridBox, GridIndex,
    MollerKinematics64, MomentumVec64, QuadratureConfig, Spin, SpinorKind, VertexTruncation,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KNOWN_UNATTAINABLE: &[&str] = &["3b"];

struct Outcome {
    id: &'static str,
    title: &'static str,
    passed: bool,
    detail: String,
    elapsed: Duration,
    budget: Duration,
}

fn run(id: &'static str, title: &'static str, budget_s: u64, f: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (passed, detail) = f();
    Outcome {
        id,
        title,
        passed,
        detail,
        elapsed: start.elapsed(),
        budget: Duration::from_secs(budget_s),
    }
}

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

// ---- oracles ----

/// Composite Simpson on `[a, b]` with `n` (even) intervals.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, whole: f64, depth: u32) -> f64 {
    let c = 0.5 * (a + b);
    let left = simpson(f, a, c, 2);
    let right = simpson(f, c, b, 2);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive_simpson(f, a, c, 0.5 * tol, left, depth - 1) + adaptive_simpson(f, c, b, 0.5 * tol, right, depth - 1)
}

/// `Γ(−1/2, x) = x^{−1/2} ∫₀^∞ e^{−u/2}·e^{−x·eᵘ} du` (substitution `w = x·eᵘ`).
fn incomplete_gamma_oracle(x: f64) -> f64 {
    let upper = (1.0 + 60.0 / x).ln();
    let f = |u: f64| (-0.5 * u - x * u.exp()).exp();
    let pieces = 64;
    let h = upper / pieces as f64;
    // the integrand peaks at u = 0 with value e^{−x}
    let tol = 1e-16 * (-x).exp() * h;
    let total: f64 = (0..pieces)
        .map(|i| {
            let (a, b) = (i as f64 * h, (i + 1) as f64 * h);
            adaptive_simpson(&f, a, b, tol, simpson(f, a, b, 2), 40)
        })
        .sum();
    total / x.sqrt()
}

/// `μ·e^{μ²}·Γ(−1/2, μ²) = ∫₀^∞ e^{−w/2}·e^{−μ²(e^w − 1)} dw`.
fn yukawa_coincidence_oracle(mu: f64) -> f64 {
    let mu2 = mu * mu;
    let upper = (1.0 + 50.0 / mu2).ln().max(80.0);
    simpson(|w| (-0.5 * w - mu2 * w.exp_m1()).exp(), 0.0, upper, 400_000)
}

/// `2^{n+1}·n!/((2n+1)·√((2n)!))` through log-factorials.
fn coulomb_even_oracle(n: usize) -> f64 {
    let ln_fact = |k: usize| (1..=k).map(|j| (j as f64).ln()).sum::<f64>();
    ((n + 1) as f64 * 2f64.ln() + ln_fact(n) - 0.5 * ln_fact(2 * n)).exp() / (2 * n + 1) as f64
}

/// `ψ₀..ψ_N` at `x` by the three-term recurrence.
fn hermite_functions_oracle(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = vec![PI.powf(-0.25) * (-0.5 * x * x).exp()];
    if n_max >= 1 {
        out.push(2f64.sqrt() * x * out[0]);
    }
    for n in 1..n_max {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * x * out[n] - (nf / (nf + 1.0)).sqrt() * out[n - 1];
        out.push(next);
    }
    out
}

type IntMat = [[(i64, i64); 4]; 4];

/// `γ¹..γ⁴` of the standard representation as Gaussian-integer tables.
fn gamma_tables() -> [IntMat; 4] {
    let (z, o, i) = ((0, 0), (1, 0), (0, 1));
    let (mo, mi) = ((-1, 0), (0, -1));
    [
        [[z, z, z, o], [z, z, o, z], [z, o, z, z], [o, z, z, z]],
        [[z, z, z, mi], [z, z, i, z], [z, mi, z, z], [i, z, z, z]],
        [[z, z, o, z], [z, z, z, mo], [o, z, z, z], [z, mo, z, z]],
        [[mi, z, z, z], [z, mi, z, z], [z, z, i, z], [z, z, z, i]],
    ]
}

fn int_mul(a: &IntMat, b: &IntMat) -> IntMat {
    let mut out = [[(0, 0); 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            for k in 0..4 {
                let (x, y) = (a[r][k], b[k][c]);
                out[r][c].0 += x.0 * y.0 - x.1 * y.1;
                out[r][c].1 += x.0 * y.1 + x.1 * y.0;
            }
        }
    }
    out
}

fn to_complex(m: &IntMat) -> [[Complex64; 4]; 4] {
    m.map(|row| row.map(|(a, b)| Complex64::new(a as f64, b as f64)))
}

fn library_as_integers(g: &GammaSet64) -> Option<[IntMat; 4]> {
    let mut out = [[[(0i64, 0i64); 4]; 4]; 4];
    for (mu, m) in g.matrices().iter().enumerate() {
        for r in 0..4 {
            for c in 0..4 {
                let z = m.0[r][c];
                if z.re.fract() != 0.0 || z.im.fract() != 0.0 {
                    return None;
                }
                out[mu][r][c] = (z.re as i64, z.im as i64);
            }
        }
    }
    Some(out)
}

fn random_momentum(rng: &mut ChaCha8Rng, radius: f64) -> MomentumVec64 {
    loop {
        let p = MomentumVec64::new(
            rng.gen_range(-radius..radius),
            rng.gen_range(-radius..radius),
            rng.gen_range(-radius..radius),
        );
        if p.norm() <= radius {
            return p;
        }
    }
}

fn bar(g4: &[[Complex64; 4]; 4], s: &[Complex64; 4]) -> [Complex64; 4] {
    let i = Complex64::new(0.0, 1.0);
    std::array::from_fn(|c| (0..4).map(|k| s[k].conj() * g4[k][c]).sum::<Complex64>() * i)
}

fn dot(a: &[Complex64; 4], b: &[Complex64; 4]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

// ---- criteria ----

fn c1() -> (bool, String) {
    let exact = coulomb_even::<f64>(0);
    let q = coulomb_quadrature::<f64>(0, &cfg()).map(|v| v.value.re);
    match q {
        Ok(q) => (
            exact == 2.0 && (q - 2.0).abs() <= 1e-6,
            format!(
                "closed form {exact:?} (exactly 2 required); quadrature {q:.17} (|diff| {:.2e} <= 1e-6)",
                (q - 2.0).abs()
            ),
        ),
        Err(e) => (false, e.to_string()),
    }
}

fn c2() -> (bool, String) {
    let mut worst_even = 0.0f64;
    let mut worst_oracle = 0.0f64;
    let mut worst_odd = 0.0f64;
    for n1 in 0..=10usize {
        let closed = coulomb_even::<f64>(n1);
        worst_oracle = worst_oracle.max(rel(closed, coulomb_even_oracle(n1)));
        match (
            coulomb_quadrature::<f64>(2 * n1, &cfg()),
            coulomb_quadrature::<f64>(2 * n1 + 1, &cfg()),
        ) {
            (Ok(e), Ok(o)) => {
                worst_even = worst_even.max(rel(e.value.re, closed));
                worst_odd = worst_odd.max(o.value.norm());
            }
            (Err(e), _) | (_, Err(e)) => return (false, e.to_string()),
        }
    }
    (
        worst_even <= 1e-6 && worst_odd <= 1e-10 && worst_oracle <= 1e-12,
        format!(
            "even rel err {worst_even:.2e} <= 1e-6; odd |value| {worst_odd:.2e} <= 1e-10; closed form vs log-factorial {worst_oracle:.2e}"
        ),
    )
}

fn c3a() -> (bool, String) {
    let mut worst = 0.0f64;
    let mut worst_closed = 0.0f64;
    for mu in [0.25, 0.5, 1.0, 2.0, 4.0] {
        let oracle = yukawa_coincidence_oracle(mu);
        match g_sharp_axis(0, mu, &cfg()) {
            Ok(v) => worst = worst.max(rel(v.value.re, oracle)),
            Err(e) => return (false, e.to_string()),
        }
        let direct = mu * (mu * mu).exp() * incomplete_gamma_neg_half(mu * mu).unwrap();
        worst_closed = worst_closed.max(rel(direct, oracle));
    }
    (
        worst <= 1e-6 && worst_closed <= 1e-6,
        format!("g_sharp_axis rel err {worst:.2e}, mu e^(mu^2) Gamma(-1/2, mu^2) rel err {worst_closed:.2e} (<= 1e-6)"),
    )
}

fn c3b() -> (bool, String) {
    let mu = 1e-3f64;
    match g_sharp_axis(0, mu, &cfg()) {
        Ok(v) => {
            let gap = (v.value.re - 2.0).abs();
            let closed = yukawa_coincidence(mu).unwrap();
            (
                gap <= 1e-3,
                format!(
                    "value {:.9} (closed form {closed:.9}); |value - 2| = {gap:.3e} vs 1e-3; leading term 2 sqrt(pi) mu = {:.3e}",
                    v.value.re,
                    2.0 * PI.sqrt() * mu
                ),
            )
        }
        Err(e) => (false, e.to_string()),
    }
}

fn c4() -> (bool, String) {
    let mut worst = 0.0f64;
    let mut at = 0.0;
    let points = 41;
    for i in 0..points {
        let x = 1e-6 * (25.0f64 / 1e-6).powf(i as f64 / (points - 1) as f64);
        let e = rel(incomplete_gamma_neg_half(x).unwrap(), incomplete_gamma_oracle(x));
        if e > worst {
            worst = e;
            at = x;
        }
    }
    (
        worst <= 1e-10,
        format!("max rel err {worst:.2e} at x = {at:.3e} over {points} points (<= 1e-10)"),
    )
}

fn c5() -> (bool, String) {
    let mut worst = 0.0f64;
    let mut lap_worst = 0.0f64;
    for mu in [0.5, 1.0, 2.0] {
        let mut table = match GreensTable::new(mu, cfg()) {
            Ok(t) => t,
            Err(e) => return (false, e.to_string()),
        };
        let inner = GridBox::cube(3).unwrap();
        let outer = GridBox::cube(5).unwrap();
        for nh in inner.indices() {
            for n in inner.indices() {
                worst = worst.max(table.difference_equation_residual(n, nh).unwrap());
            }
            // the same operator through the grid module's composed Δ#Δ#
            let f = dpsfield::GridFunction::from_fn(outer, |n| table.get(n, nh).unwrap().value);
            let lap = dpsfield::laplacian_sharp(&f).unwrap();
            for n in inner.indices() {
                let source = if n == nh { 1.0 } else { 0.0 };
                let r = (lap.at(n) - f.at(n) * (mu * mu) + source).norm();
                lap_worst = lap_worst.max(r);
            }
        }
    }
    (
        worst <= 1e-6 && lap_worst <= 1e-6,
        format!("max residual {worst:.2e} (explicit stencil), {lap_worst:.2e} (grid operators) over 3^3 x 3^3 at mu in {{0.5,1,2}} (<= 1e-6)"),
    )
}

fn c6() -> (bool, String) {
    let rule = GaussHermite::<f64>::new(200).unwrap();
    let n_max = 40;
    let table: Vec<Vec<f64>> = rule
        .nodes()
        .iter()
        .map(|&x| hermite_functions_oracle(n_max, x))
        .collect();
    let mut lib_vs_oracle = 0.0f64;
    for (&x, h) in rule.nodes().iter().zip(&table) {
        for (n, v) in h.iter().enumerate() {
            lib_vs_oracle = lib_vs_oracle.max((hermite_function(n, x) - v).abs());
        }
    }
    let mut worst = 0.0f64;
    for n in 0..=n_max {
        for m in 0..=n_max {
            let s: f64 = table
                .iter()
                .zip(rule.scaled_weights())
                .map(|(h, w)| w * h[n] * h[m])
                .sum();
            worst = worst.max((s - if n == m { 1.0 } else { 0.0 }).abs());
        }
    }
    (
        worst <= 1e-10 && lib_vs_oracle <= 1e-12,
        format!("max |<psi_n,psi_m> - delta| {worst:.2e} (<= 1e-10); library vs recurrence {lib_vs_oracle:.2e}"),
    )
}

fn c7() -> (bool, String) {
    let tables = gamma_tables();
    let lib = dpsfield::gamma_set::<f64>();
    let same = library_as_integers(&lib).is_some_and(|g| g == tables);
    let mut clifford_exact = true;
    for mu in 0..4 {
        for nu in 0..4 {
            let (ab, ba) = (int_mul(&tables[mu], &tables[nu]), int_mul(&tables[nu], &tables[mu]));
            let eta = match (mu == nu, mu) {
                (false, _) => 0,
                (true, 3) => -1,
                (true, _) => 1,
            };
            for r in 0..4 {
                for c in 0..4 {
                    let want = if r == c { 2 * eta } else { 0 };
                    if ab[r][c].0 + ba[r][c].0 != want || ab[r][c].1 + ba[r][c].1 != 0 {
                        clifford_exact = false;
                    }
                }
            }
        }
    }
    let g: Vec<_> = tables.iter().map(to_complex).collect();
    let i = Complex64::new(0.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut ortho, mut spin_sum) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let m = rng.gen_range(0.2..2.0);
        let p = random_momentum(&mut rng, 10.0 * m);
        let e = (p.norm_sqr() + m * m).sqrt();
        let u: Vec<_> = Spin::BOTH
            .iter()
            .map(|&r| spinor_u(r, &p, m).unwrap().components)
            .collect();
        let v: Vec<_> = Spin::BOTH
            .iter()
            .map(|&r| spinor_v(r, &p, m).unwrap().components)
            .collect();
        for a in 0..2 {
            for b in 0..2 {
                let d = if a == b { 1.0 } else { 0.0 };
                for x in [
                    dot(&bar(&g[3], &u[a]), &u[b]) - d,
                    dot(&bar(&g[3], &v[a]), &v[b]) + d,
                    dot(&bar(&g[3], &u[a]), &v[b]),
                    dot(&bar(&g[3], &v[a]), &u[b]),
                ] {
                    ortho = ortho.max(x.norm());
                }
            }
        }
        for r in 0..4 {
            for c in 0..4 {
                let lhs: Complex64 = u.iter().map(|s| s[r] * bar(&g[3], s)[c]).sum::<Complex64>() * (m / e);
                let slash: Complex64 = (0..3).map(|j| g[j][r][c] * p[j]).sum();
                let id = if r == c { m } else { 0.0 };
                let rhs = (-i * slash + i * e * g[3][r][c] + id) / (2.0 * e);
                spin_sum = spin_sum.max((lhs - rhs).norm());
            }
        }
    }
    let bbox = GridBox::cube(6).unwrap();
    let mut mode = 0.0f64;
    for _ in 0..10 {
        let p = random_momentum(&mut rng, 2.0);
        let m = rng.gen_range(0.3..2.0);
        for kind in [SpinorKind::Particle, SpinorKind::Antiparticle] {
            for r in Spin::BOTH {
                mode = mode.max(dirac_mode_residual(&lib, kind, r, &p, m, bbox).unwrap());
            }
        }
    }
    (
        same && clifford_exact && ortho <= 1e-12 && spin_sum <= 1e-12 && mode <= 1e-12,
        format!(
            "library matrices equal the integer tables: {same}; Clifford exact in integers: {clifford_exact}; orthonormality {ortho:.2e}; spin sum {spin_sum:.2e}; mode residual {mode:.2e} (<= 1e-12)"
        ),
    )
}

fn c8() -> (bool, String) {
    let m = 1.0;
    let dir = MomentumVec64::new(0.48, -0.6, 0.64);
    let points = 9;
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for k in 0..points {
        let frac = 0.01 * 10f64.powf(k as f64 / (points - 1) as f64);
        let p = dir.scale(frac * m / dir.norm());
        let mut err = 0.0f64;
        for r in Spin::BOTH {
            let (a, b) = (low_momentum_u(r, &p, m).unwrap(), spinor_u(r, &p, m).unwrap());
            for j in 0..4 {
                err = err.max((a.components[j] - b.components[j]).norm());
            }
        }
        xs.push(p.norm().ln());
        ys.push(err.ln());
    }
    let n = points as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (
        (3.8..=4.2).contains(&slope),
        format!("log-log slope {slope:.4} in [3.8, 4.2]"),
    )
}

fn c9() -> (bool, String) {
    let mut worst = 0.0f64;
    for r in [0.5, 1.0, 2.0] {
        for mu in [0.25f64, 1.0] {
            let exact = -(-mu * r).exp() / (4.0 * PI * r);
            match continuum_yukawa_oracle(r, mu, &cfg()) {
                Ok(v) => worst = worst.max(rel(v.value, exact)),
                Err(e) => return (false, e.to_string()),
            }
        }
    }
    (worst <= 1e-3, format!("max rel err {worst:.2e} (<= 1e-3)"))
}

fn c10() -> (bool, String) {
    let trunc = VertexTruncation::new(32).unwrap();
    let oracle_cfg = QuadratureConfig {
        gh_nodes: 128,
        tol: 1e-6,
        ..cfg()
    };
    let rest = MollerKinematics64::at_rest(1.0, 1.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut dir = || {
        let p = random_momentum(&mut rng, 1.0);
        p.scale(0.1 / p.norm())
    };
    let mut moving = rest;
    moving.p1 = dir();
    moving.p2 = dir();
    moving.p1_out = dir();
    moving.p2_out = dir();
    let mut parts = Vec::new();
    let mut worst = 0.0f64;
    for (label, kin) in [("rest", rest), ("|p| = 0.1 m", moving)] {
        let fast = match moller_reduced_element(&kin, trunc, &cfg()) {
            Ok(v) => v.value,
            Err(e) => return (false, e.to_string()),
        };
        let slow = match moller_oracle(&kin, trunc, &oracle_cfg) {
            Ok(v) => v.value,
            Err(e) => return (false, e.to_string()),
        };
        let e = (fast - slow).norm() / slow.norm();
        worst = worst.max(e);
        parts.push(format!("{label}: {e:.2e}"));
    }
    (worst <= 1e-4, format!("{} (<= 1e-4)", parts.join(", ")))
}

fn c11() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    let mut found = 0;
    while found < 50 {
        let n = GridIndex::new(rng.gen_range(0..8), rng.gen_range(0..8), rng.gen_range(0..8));
        let m = GridIndex::new(rng.gen_range(0..8), rng.gen_range(0..8), rng.gen_range(0..8));
        if (0..3).all(|j| (n.0[j] + m.0[j]) % 2 == 0) {
            continue;
        }
        found += 1;
        let mu = rng.gen_range(0.1..4.0);
        worst = worst.max(g_sharp(n, m, mu, &cfg()).unwrap().value.norm());
    }
    (
        worst <= 1e-10,
        format!("max |G#| {worst:.2e} over 50 parity-violating pairs (<= 1e-10)"),
    )
}

fn c12() -> (bool, String) {
    let args = ["yukawa", "--mu", "1", "--n-max", "8"];
    let outputs: Vec<_> = ["1", "2", "4"]
        .iter()
        .map(|t| {
            Command::new(env!("CARGO_BIN_EXE_dpsfield"))
                .args(args)
                .env("DPSFIELD_THREADS", t)
                .output()
                .expect("binary runs")
        })
        .collect();
    let ok = outputs.iter().all(|o| o.status.success());
    let identical = outputs.windows(2).all(|w| w[0].stdout == w[1].stdout);
    (
        ok && identical && !outputs[0].stdout.is_empty(),
        format!(
            "3 runs (1, 2, 4 threads), byte-identical: {identical}, {} bytes",
            outputs[0].stdout.len()
        ),
    )
}

fn main() {
    let outcomes = [
        run("1", "Coulomb coincidence value", 1, c1),
        run("2", "Coulomb even family", 10, c2),
        run("3a", "Yukawa coincidence closed form", 5, c3a),
        run("3b", "Yukawa coincidence at mu = 1e-3 within 1e-3 of 2", 5, c3b),
        run("4", "Incomplete gamma vs quadrature", 1, c4),
        run("5", "Difference-equation residual", 120, c5),
        run("6", "Hermite orthonormality", 5, c6),
        run("7", "Dirac suite", 1, c7),
        run("8", "Low-momentum expansion slope", 1, c8),
        run("9", "Continuum Yukawa oracle", 5, c9),
        run("10", "Moller oracle equivalence", 300, c10),
        run("11", "Parity selection", 30, c11),
        run("12", "Determinism", 5, c12),
    ];
    let mut fatal = 0;
    for o in &outcomes {
        let status = if o.passed { "PASS" } else { "FAIL" };
        let over = if o.elapsed > o.budget {
            " [over runtime budget]"
        } else {
            ""
        };
        println!(
            "{status} [{}] {}: {} ({:.2} s, budget {} s){over}",
            o.id,
            o.title,
            o.detail,
            o.elapsed.as_secs_f64(),
            o.budget.as_secs()
        );
        if !o.passed && !KNOWN_UNATTAINABLE.contains(&o.id) {
            fatal += 1;
        }
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    println!("acceptance: {passed}/{} criteria pass", outcomes.len());
    if fatal > 0 {
        std::process::exit(1);
    }
}
