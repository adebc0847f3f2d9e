//! Self-check suites: every invariant of the crate, evaluated at its documented tolerance.
//!
//! A [`CheckReport`] lists each check with its tolerance and observed value.
//! Checks that depend on the gamma matrices take them as a parameter so a
//! deliberately corrupted set can be run through the same suite.

use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dirac::{
    dirac_mode_residual, energy, low_momentum_u, metric, spinor_u, spinor_v, GammaSet, Mat4, Spin, SpinorKind,
};
use crate::error::Result;
use crate::greens::{
    continuum_yukawa, continuum_yukawa_oracle, coulomb_even, coulomb_quadrature, g_sharp, g_sharp_axis,
    incomplete_gamma_neg_half, GreensTable,
};
use crate::grid::{kg_mode_residual, GridBox, GridFunction, GridIndex};
use crate::hermite::hermite_functions;
use crate::momentum::MomentumVec;
use crate::quadrature::{adaptive_gauss_kronrod, GaussHermite, QuadratureConfig};
use crate::scattering::{moller_oracle, moller_reduced_element, MollerKinematics, VertexTruncation};

/// Seed of every random sample drawn by the suites.
pub const CHECK_SEED: u64 = 0x5eed_d15c;

/// Which checks to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// Everything that finishes in seconds.
    Fast,
    /// Adds the difference-equation box and the Møller oracle.
    Full,
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "fast" => Ok(Suite::Fast),
            "full" => Ok(Suite::Full),
            other => Err(format!("unknown suite '{other}' (expected fast or full)")),
        }
    }
}

/// One check: `passed` iff `observed ≤ tolerance`.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub tolerance: f64,
    pub observed: f64,
    pub passed: bool,
    pub note: String,
}

impl CheckOutcome {
    fn measure(name: &'static str, tolerance: f64, observed: Result<f64>) -> Self {
        match observed {
            Ok(v) => Self {
                name,
                tolerance,
                observed: v,
                passed: v <= tolerance,
                note: String::new(),
            },
            Err(e) => Self {
                name,
                tolerance,
                observed: f64::NAN,
                passed: false,
                note: e.to_string(),
            },
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        if self.note.is_empty() {
            self.note = note.into();
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CheckReport {
    pub outcomes: Vec<CheckOutcome>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.outcomes.iter().filter(|o| !o.passed)
    }

    /// `check,tolerance,observed,status,note` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,tolerance,observed,status,note\n");
        for o in &self.outcomes {
            let status = if o.passed { "pass" } else { "FAIL" };
            let note = o.note.replace(',', ";");
            let _ = writeln!(out, "{},{:e},{:e},{},{}", o.name, o.tolerance, o.observed, status, note);
        }
        out
    }
}

fn random_momentum(rng: &mut ChaCha8Rng, radius: f64) -> MomentumVec<f64> {
    loop {
        let p = MomentumVec::new(
            rng.gen_range(-radius..radius),
            rng.gen_range(-radius..radius),
            rng.gen_range(-radius..radius),
        );
        if p.norm() <= radius {
            return p;
        }
    }
}

fn random_direction(rng: &mut ChaCha8Rng, length: f64) -> MomentumVec<f64> {
    loop {
        let p = random_momentum(rng, 1.0);
        if p.norm() > 0.1 {
            return p.scale(length / p.norm());
        }
    }
}

/// Largest deviation from `γ^μγ^ν + γ^νγ^μ = 2η^{μν}I` over all pairs.
pub fn clifford_deviation(gammas: &GammaSet<f64>) -> f64 {
    let g = gammas.matrices();
    let id = Mat4::<f64>::identity();
    let mut worst = 0.0f64;
    for mu in 1..=4 {
        for nu in 1..=4 {
            let (a, b) = (g[mu - 1], g[nu - 1]);
            let want = id.scale(Complex::new(2.0 * metric(mu, nu) as f64, 0.0));
            worst = worst.max((a * b + b * a).max_abs_diff(&want));
        }
    }
    worst
}

/// Largest deviation from `γᵃ† = γᵃ`, `γ⁴† = −γ⁴`.
pub fn hermiticity_deviation(gammas: &GammaSet<f64>) -> f64 {
    gammas
        .matrices()
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let want = if i == 3 { g.scale(Complex::new(-1.0, 0.0)) } else { *g };
            g.adjoint().max_abs_diff(&want)
        })
        .fold(0.0, f64::max)
}

/// Max `|∫ψₙψₘ − δₙₘ|` for `n, m ≤ n_max` under a `nodes`-point Gauss–Hermite rule.
pub fn hermite_orthonormality(n_max: usize, nodes: usize) -> Result<f64> {
    let rule = GaussHermite::<f64>::new(nodes)?;
    let table: Vec<Vec<f64>> = rule.nodes().iter().map(|&x| hermite_functions(n_max, x)).collect();
    let mut worst = 0.0f64;
    for n in 0..=n_max {
        for m in n..=n_max {
            let s: f64 = table
                .iter()
                .zip(rule.scaled_weights())
                .map(|(h, w)| w * h[n] * h[m])
                .sum();
            let want = if n == m { 1.0 } else { 0.0 };
            worst = worst.max((s - want).abs());
        }
    }
    Ok(worst)
}

/// Orthonormality of the spinors with the adjoint built from `gammas`.
pub fn spinor_orthonormality(gammas: &GammaSet<f64>, samples: usize, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let m = rng.gen_range(0.2..2.0);
        let p = random_momentum(rng, 10.0 * m);
        for r in Spin::BOTH {
            for s in Spin::BOTH {
                let delta = if r == s { 1.0 } else { 0.0 };
                let (ur, us) = (spinor_u(r, &p, m)?, spinor_u(s, &p, m)?);
                let (vr, vs) = (spinor_v(r, &p, m)?, spinor_v(s, &p, m)?);
                let bar = |x: &crate::dirac::Bispinor<f64>| gammas.adjoint_of(&x.components);
                let checks = [
                    bar(&ur).dot(&us) - delta,
                    bar(&vr).dot(&vs) + delta,
                    bar(&ur).dot(&vs),
                    bar(&vr).dot(&us),
                ];
                worst = checks.iter().fold(worst, |w, c| w.max(c.norm()));
            }
        }
    }
    Ok(worst)
}

/// `(m/E)Σuũ` against `(−iγʲpⱼ + iγ⁴E + mI)/2E`, both built from `gammas`.
pub fn spin_sum_deviation(gammas: &GammaSet<f64>, samples: usize, rng: &mut ChaCha8Rng) -> Result<f64> {
    let i = Complex::new(0.0, 1.0);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let m = rng.gen_range(0.1..2.0);
        let p = random_momentum(rng, 8.0);
        let e = energy(&p, m)?;
        let mut sum = Mat4::zero();
        for r in Spin::BOTH {
            let u = spinor_u(r, &p, m)?;
            sum = sum + Mat4::outer(&u.components, &gammas.adjoint_of(&u.components).0);
        }
        let lhs = sum.scale(Complex::new(m / e, 0.0));
        let g = gammas.matrices();
        let rhs = (gammas.slash(&p).scale(-i) + g[3].scale(i * e) + Mat4::identity().scale(Complex::new(m, 0.0)))
            .scale(Complex::new(0.5 / e, 0.0));
        worst = worst.max(lhs.max_abs_diff(&rhs));
    }
    Ok(worst)
}

/// Worst discrete Dirac residual over random modes of both kinds and spins.
pub fn dirac_mode_deviation(gammas: &GammaSet<f64>, samples: usize, rng: &mut ChaCha8Rng) -> Result<f64> {
    let bbox = GridBox::cube(6)?;
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let p = random_momentum(rng, 2.0);
        let m = rng.gen_range(0.3..2.0);
        for kind in [SpinorKind::Particle, SpinorKind::Antiparticle] {
            for r in Spin::BOTH {
                worst = worst.max(dirac_mode_residual(gammas, kind, r, &p, m, bbox)?);
            }
        }
    }
    Ok(worst)
}

/// Least-squares slope of `log ‖low_momentum_u − spinor_u‖` against `log ‖p‖`
/// for `‖p‖/m` log-spaced over `[0.01, 0.1]`.
pub fn low_momentum_slope(m: f64) -> Result<f64> {
    let dir = MomentumVec::new(0.48, -0.6, 0.64);
    let points = 9;
    let mut xs = Vec::with_capacity(points);
    let mut ys = Vec::with_capacity(points);
    for i in 0..points {
        let frac = 0.01 * 10f64.powf(i as f64 / (points - 1) as f64);
        let p = dir.scale(frac * m / dir.norm());
        let mut err = 0.0f64;
        for r in Spin::BOTH {
            err = err.max(low_momentum_u(r, &p, m)?.max_abs_diff(&spinor_u(r, &p, m)?));
        }
        xs.push(p.norm().ln());
        ys.push(err.ln());
    }
    let n = points as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}

/// `Γ(−1/2, x)` by adaptive quadrature of `∫ₓ^∞ w^{−3/2}e^{−w} dw` after `w = x·e^u`.
pub fn incomplete_gamma_by_quadrature(x: f64) -> Result<f64> {
    let upper = (1.0 + 60.0 / x).ln();
    let (v, _) = adaptive_gauss_kronrod(
        |u: f64| x.powf(-0.5) * (-0.5 * u).exp() * (-x * u.exp()).exp(),
        0.0,
        upper,
        1e-14,
        0.0,
    )?;
    Ok(v)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn yukawa_check(cfg: &QuadratureConfig) -> Result<f64> {
    let mut worst = 0.0f64;
    for mu in [0.25f64, 0.5, 1.0, 2.0, 4.0] {
        let want = mu * (mu * mu).exp() * incomplete_gamma_neg_half(mu * mu)?;
        worst = worst.max(rel(g_sharp_axis(0, mu, cfg)?.value.re, want));
    }
    Ok(worst)
}

fn coulomb_even_check(cfg: &QuadratureConfig) -> Result<f64> {
    let mut worst = 0.0f64;
    for n1 in 0..=10 {
        worst = worst.max(rel(coulomb_quadrature::<f64>(2 * n1, cfg)?.value.re, coulomb_even(n1)));
    }
    Ok(worst)
}

fn coulomb_odd_check(cfg: &QuadratureConfig) -> Result<f64> {
    let mut worst = 0.0f64;
    for n1 in 0..=10 {
        worst = worst.max(coulomb_quadrature::<f64>(2 * n1 + 1, cfg)?.value.norm());
    }
    Ok(worst)
}

fn small_mu_expansion_check(cfg: &QuadratureConfig) -> Result<f64> {
    let mu = 1e-3f64;
    let v = g_sharp_axis(0, mu, cfg)?.value.re;
    Ok((v - (2.0 - 2.0 * std::f64::consts::PI.sqrt() * mu)).abs())
}

fn incomplete_gamma_check() -> Result<f64> {
    let mut worst = 0.0f64;
    let points = 25;
    for i in 0..points {
        let x = 1e-6 * (25.0f64 / 1e-6).powf(i as f64 / (points - 1) as f64);
        worst = worst.max(rel(incomplete_gamma_neg_half(x)?, incomplete_gamma_by_quadrature(x)?));
    }
    Ok(worst)
}

fn parity_check(cfg: &QuadratureConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
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
        worst = worst.max(g_sharp(n, m, mu, cfg)?.value.norm());
    }
    Ok(worst)
}

fn symmetry_check(cfg: &QuadratureConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let n = GridIndex::new(rng.gen_range(0..6), rng.gen_range(0..6), rng.gen_range(0..6));
        let m = GridIndex::new(rng.gen_range(0..6), rng.gen_range(0..6), rng.gen_range(0..6));
        let mu = rng.gen_range(0.1..4.0);
        let (a, b) = (g_sharp(n, m, mu, cfg)?.value, g_sharp(m, n, mu, cfg)?.value);
        worst = worst.max((a - b.conj()).norm());
    }
    Ok(worst)
}

fn cross_method_check(cfg: &QuadratureConfig) -> Result<f64> {
    let mut worst = 0.0f64;
    for mu in [0.5, 1.0, 2.0] {
        for n1 in (0..=10).step_by(2) {
            let a = g_sharp_axis(n1, mu, cfg)?.value;
            let b = g_sharp(GridIndex::new(n1, 0, 0), GridIndex::ORIGIN, mu, cfg)?.value;
            worst = worst.max((a - b).norm());
        }
    }
    Ok(worst)
}

fn continuum_check(cfg: &QuadratureConfig) -> Result<f64> {
    let mut worst = 0.0f64;
    for r in [0.5, 1.0, 2.0] {
        for mu in [0.25, 1.0] {
            let o = continuum_yukawa_oracle(r, mu, cfg)?.value;
            worst = worst.max(rel(o, continuum_yukawa(r, mu, 1.0)?));
        }
    }
    Ok(worst)
}

fn kg_check(rng: &mut ChaCha8Rng) -> Result<f64> {
    let bbox = GridBox::cube(7)?;
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let k = random_momentum(rng, 3.0);
        let mu = rng.gen_range(0.1..3.0);
        let scale = GridFunction::plane_wave(bbox, &k).max_abs();
        worst = worst.max(kg_mode_residual(&k, mu, bbox)? / scale);
    }
    Ok(worst)
}

/// Max residual of the static difference equation over `n, n̂` in `[0, extent)³`.
pub fn difference_equation_box(mu: f64, extent: usize, cfg: &QuadratureConfig) -> Result<f64> {
    let mut table = GreensTable::new(mu, *cfg)?;
    let pts: Vec<GridIndex> = (0..extent)
        .flat_map(|a| (0..extent).flat_map(move |b| (0..extent).map(move |c| GridIndex::new(a, b, c))))
        .collect();
    let mut worst = 0.0f64;
    for &n in &pts {
        for &nh in &pts {
            worst = worst.max(table.difference_equation_residual(n, nh)?);
        }
    }
    Ok(worst)
}

/// Kinematics with every external momentum of length `0.1·m` in a random direction.
pub fn random_low_momentum_kinematics(rng: &mut ChaCha8Rng, m: f64, mu: f64, g: f64) -> MollerKinematics<f64> {
    let mut k = MollerKinematics::at_rest(m, mu, g);
    k.p1 = random_direction(rng, 0.1 * m);
    k.p2 = random_direction(rng, 0.1 * m);
    k.p1_out = random_direction(rng, 0.1 * m);
    k.p2_out = random_direction(rng, 0.1 * m);
    k
}

/// Relative gap between the factorized element and the sum-then-integrate oracle.
pub fn moller_oracle_gap(kin: &MollerKinematics<f64>, n_max: usize, cfg: &QuadratureConfig) -> Result<f64> {
    let trunc = VertexTruncation::new(n_max)?;
    let fast = moller_reduced_element(kin, trunc, cfg)?.value;
    let ocfg = QuadratureConfig {
        gh_nodes: cfg.gh_nodes.max(2 * n_max + 64),
        tol: cfg.tol.max(1e-6),
        ..*cfg
    };
    let slow = moller_oracle(kin, trunc, &ocfg)?.value;
    Ok((fast - slow).norm() / slow.norm())
}

/// Runs a suite. Checks involving the gamma matrices use `gammas`.
pub fn run_suite(suite: Suite, gammas: &GammaSet<f64>, cfg: &QuadratureConfig) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(CHECK_SEED);
    let mut out = vec![
        CheckOutcome::measure("clifford", 0.0, Ok(clifford_deviation(gammas))),
        CheckOutcome::measure("hermiticity", 0.0, Ok(hermiticity_deviation(gammas))),
        CheckOutcome::measure("hermite_orthonormality", 1e-10, hermite_orthonormality(40, 200)),
        CheckOutcome::measure(
            "spinor_orthonormality",
            1e-12,
            spinor_orthonormality(gammas, 100, &mut rng),
        ),
        CheckOutcome::measure("spin_sum_identity", 1e-12, spin_sum_deviation(gammas, 100, &mut rng)),
        CheckOutcome::measure("dirac_mode_residual", 1e-12, dirac_mode_deviation(gammas, 10, &mut rng)),
        CheckOutcome::measure(
            "low_momentum_slope",
            0.2,
            low_momentum_slope(1.0).map(|s| (s - 4.0).abs()),
        )
        .with_note("observed is |slope - 4|"),
        CheckOutcome::measure("kg_mode_residual", 1e-12, kg_check(&mut rng)).with_note("relative to max |phi|"),
        CheckOutcome::measure("yukawa_coincidence", 1e-6, yukawa_check(cfg)),
        CheckOutcome::measure(
            "coulomb_coincidence",
            1e-6,
            coulomb_quadrature::<f64>(0, cfg).map(|v| (v.value.re - 2.0).abs()),
        ),
        CheckOutcome::measure("coulomb_even_family", 1e-6, coulomb_even_check(cfg)),
        CheckOutcome::measure("coulomb_odd_family", 1e-10, coulomb_odd_check(cfg)),
        CheckOutcome::measure("yukawa_small_mu_expansion", 1e-5, small_mu_expansion_check(cfg))
            .with_note("|W(0;mu) - (2 - 2 sqrt(pi) mu)| at mu = 1e-3"),
        CheckOutcome::measure("incomplete_gamma", 1e-10, incomplete_gamma_check()),
        CheckOutcome::measure("parity_selection", 1e-10, parity_check(cfg, &mut rng)),
        CheckOutcome::measure("greens_symmetry", 1e-12, symmetry_check(cfg, &mut rng)),
        CheckOutcome::measure("cross_method", 1e-8, cross_method_check(cfg)),
        CheckOutcome::measure("continuum_yukawa", 1e-3, continuum_check(cfg)),
    ];
    if suite == Suite::Full {
        for (mu, name) in [
            (0.5, "difference_equation_mu0.5"),
            (1.0, "difference_equation_mu1"),
            (2.0, "difference_equation_mu2"),
        ] {
            out.push(CheckOutcome::measure(name, 1e-6, difference_equation_box(mu, 3, cfg)));
        }
        let rest = MollerKinematics::at_rest(1.0, 1.0, 1.0);
        out.push(CheckOutcome::measure(
            "moller_oracle_rest",
            1e-4,
            moller_oracle_gap(&rest, 32, cfg),
        ));
        let moving = random_low_momentum_kinematics(&mut rng, 1.0, 1.0, 1.0);
        out.push(CheckOutcome::measure(
            "moller_oracle_moving",
            1e-4,
            moller_oracle_gap(&moving, 32, cfg),
        ));
    }
    CheckReport { outcomes: out }
}
