//! One function per subcommand; each returns the CSV table to emit.

use hypolib::acceptance::{outcomes_table, run_all, run_one, DEFAULT_SEED, RUNGE_BUDGET};
use hypolib::behavior::{anchor_grid, fatou_probe, maximal_inequality_probe, maximal_test_suite, RegionKind, SampleNet};
use hypolib::classical::{borichev_circle_sup, d_coefficient, dnlog_upper, dnlog_upper_corrected, log_inv_one_minus_r2, runge_best_effort};
use hypolib::polyspherical::{asymptotic_law, phi_closed_form, phi_n, phi_n_frame, spherical_zeros, zero_free_radius};
use hypolib::report::{complex_cells, fmt_real, CsvTable};
use hypolib::spectral::polyharmonic_kernel;
use hypolib::transforms::{convergence_probe, dirichlet_solve, normalized_kernel, radial_ladder, riquier_solve, ConvergenceMode};
use hypolib::{BoundaryPoint, DiskPoint, RadialFrame};

use crate::config::{circle_angles, Failure, Outcome, Params};

/// Tables plus any side artifacts and the verdict of the command's own check.
pub struct Artifacts {
    pub table: CsvTable,
    pub json: Option<serde_json::Value>,
    pub failed: Option<String>,
}

impl Artifacts {
    fn table(table: CsvTable) -> Self {
        Artifacts { table, json: None, failed: None }
    }

    fn check(mut self, ok: bool, what: impl FnOnce() -> String) -> Self {
        if !ok && self.failed.is_none() {
            self.failed = Some(what());
        }
        self
    }
}

fn cells(row: impl IntoIterator<Item = String>) -> Vec<String> {
    row.into_iter().collect()
}

/// K_{n,λ}(r e^{iθ}, 1) and its normalized form over radius × angle grids.
pub fn kernel(p: &Params) -> Outcome<Artifacts> {
    let s = p.spectral()?;
    let n = p.n_or(0);
    let radii = p.radii_or(vec![0.5])?;
    let angles = p.angles_or(vec![0.0])?;
    let xi = BoundaryPoint::new(0.0);
    let mut t = CsvTable::new(&["r", "theta", "kernel_re", "kernel_im", "normalized_re", "normalized_im"]);
    for &r in &radii {
        for &theta in &angles {
            let z = DiskPoint::from_polar(r, theta)?;
            let k = polyharmonic_kernel(n, z, xi, &s);
            let norm = normalized_kernel(n, &s, z, xi).map_or([fmt_real(f64::NAN), fmt_real(f64::NAN)], complex_cells);
            let [kr, ki] = complex_cells(k);
            let [nr, ni] = norm;
            t.push(cells([fmt_real(r), fmt_real(theta), kr, ki, nr, ni]));
        }
    }
    Ok(Artifacts::table(t))
}

/// Φ(r|λ) by circle quadrature against the hypergeometric closed form.
pub fn spherical(p: &Params) -> Outcome<Artifacts> {
    let s = p.spectral()?;
    let tol = p.tol_or(1e-8)?;
    let radii = p.radii_or((1..=9).map(|k| 0.1 * k as f64).collect())?;
    let mut t = CsvTable::new(&["r", "phi_re", "phi_im", "closed_form_re", "closed_form_im", "diff"]);
    let mut worst: f64 = 0.0;
    for &r in &radii {
        let phi = phi_n(0, r, &s)?;
        let closed = phi_closed_form(r, &s)?;
        let diff = (phi - closed).norm() / closed.norm().max(1.0);
        worst = worst.max(diff);
        let ([a, b], [c, d]) = (complex_cells(phi), complex_cells(closed));
        t.push(cells([fmt_real(r), a, b, c, d, fmt_real(diff)]));
    }
    Ok(Artifacts::table(t).check(worst <= tol, || format!("closed form off by {worst:e} > {tol:e}")))
}

/// Φ_n against its boundary law over hyperbolic radii.
pub fn asymptotics(p: &Params) -> Outcome<Artifacts> {
    let s = p.spectral_off_ray()?;
    let n = p.n_or(0);
    let big_r = p.big_r_or(&[10.0, 15.0, 20.0, 25.0])?;
    let law = asymptotic_law(n, &s)?;
    let mut t = CsvTable::new(&["R", "phi_re", "phi_im", "law_re", "law_im", "ratio_re", "ratio_im"]);
    for &rr in &big_r {
        let phi = phi_n_frame(n, &RadialFrame::from_big_r(rr), &s)?;
        let l = law.eval(rr);
        let ([a, b], [c, d], [e, f]) = (complex_cells(phi), complex_cells(l), complex_cells(phi / l));
        t.push(cells([fmt_real(rr), a, b, c, d, e, f]));
    }
    Ok(Artifacts::table(t))
}

/// Zeros of Φ(·|λ) below the largest radius of the grid, and the zero-free radius of Φ_n.
pub fn zeros(p: &Params) -> Outcome<Artifacts> {
    let s = p.spectral()?;
    let r_max = p.radii_or(vec![0.9999])?.into_iter().fold(0.0, f64::max);
    let mut t = CsvTable::new(&["kind", "index", "r"]);
    if s.require_off_ray().is_ok() {
        let z = zero_free_radius(p.n_or(0), &s)?;
        t.push(cells(["zero_free_radius".into(), z.n.to_string(), fmt_real(z.r_min)]));
    } else {
        for (k, r) in spherical_zeros(&s, r_max)?.into_iter().enumerate() {
            t.push(cells(["zero".into(), k.to_string(), fmt_real(r)]));
        }
    }
    Ok(Artifacts::table(t))
}

/// Sup error of the Dirichlet solution over a radial ladder.
pub fn dirichlet(p: &Params) -> Outcome<Artifacts> {
    let s = p.spectral_off_ray()?;
    let tol = p.tol_or(0.05)?;
    let radii = p.radii_or(radial_ladder(4))?;
    let field = dirichlet_solve(&s, p.density_or("cos:1")?)?;
    let rep = field.verify(&radii, p.anchors_or(32)?)?;
    let mut t = CsvTable::new(&["r", "sup_error"]);
    for &(r, e) in &rep.rows {
        t.push_reals(&[r, e]);
    }
    let last = rep.final_error();
    Ok(Artifacts::table(t)
        .check(last <= tol, || format!("final sup error {last:e} > {tol:e}"))
        .check(rep.is_decreasing(), || "sup error does not decrease along the ladder".into()))
}

/// Cross errors f_j/Φ_k − δ_jk g_k of the Riquier solution.
pub fn riquier(p: &Params) -> Outcome<Artifacts> {
    let s = p.spectral_off_ray()?;
    let n = p.n_or(1);
    let data = p.densities(n + 1, "cos:1")?;
    let sol = riquier_solve(&s, data)?;
    let rows = sol.verify(&p.radii_or(radial_ladder(4))?, p.anchors_or(32)?)?;
    let mut t = CsvTable::new(&["r", "k", "j", "error"]);
    for row in rows {
        t.push(cells([fmt_real(row.r), row.k.to_string(), row.j.to_string(), fmt_real(row.error)]));
    }
    Ok(Artifacts::table(t))
}

fn parse_mode(p: &Params) -> Outcome<ConvergenceMode> {
    let angles = p.anchors_or(64)?;
    let spec = p.mode.as_deref().unwrap_or("uniform");
    let bad = |m: String| Failure::Usage(format!("--mode: {m}"));
    let (head, tail) = spec.split_once(':').unwrap_or((spec, ""));
    Ok(match head {
        "uniform" => ConvergenceMode::Uniform { angles },
        "ae" => ConvergenceMode::PointwiseAe { points: p.angles_or(circle_angles(angles))? },
        "lp" => {
            let exponent = tail.parse::<f64>().map_err(|_| bad(format!("lp needs an exponent, got {tail:?}")))?;
            if !(exponent >= 1.0) {
                return Err(bad(format!("exponent {exponent} < 1")));
            }
            ConvergenceMode::Lp { p: exponent, angles }
        }
        "weak" => ConvergenceMode::WeakStar {
            modes: tail
                .split(';')
                .map(|k| k.trim().parse::<i64>().map_err(|_| bad(format!("not a mode: {k:?}"))))
                .collect::<Outcome<Vec<_>>>()?,
        },
        _ => return Err(bad(format!("unknown mode {spec:?}"))),
    })
}

/// Convergence metric of the normalized transform per radius.
pub fn convergence(p: &Params) -> Outcome<Artifacts> {
    let s = p.spectral_off_ray()?;
    let datum = p.datum_or("cos:1", &[])?;
    let mode = parse_mode(p)?;
    let rep = convergence_probe(p.n_or(0), &s, &datum, &mode, &p.radii_or(radial_ladder(4))?)?;
    let mut t = CsvTable::new(&["r", "metric"]);
    for &(r, m) in &rep.rows {
        t.push_reals(&[r, m]);
    }
    Ok(Artifacts::table(t))
}

fn region_kind(p: &Params, critical: bool) -> Outcome<RegionKind> {
    match p.kind.as_deref() {
        None if critical => Ok(RegionKind::Enlarged),
        None | Some("tube") => Ok(RegionKind::Tube),
        Some("enlarged") => Ok(RegionKind::Enlarged),
        Some(k) => Err(Failure::Usage(format!("--kind: expected tube or enlarged, got {k:?}"))),
    }
}

/// Fitted maximal constant per test function, with the refined net alongside.
pub fn maximal(p: &Params) -> Outcome<Artifacts> {
    let s = p.spectral_off_ray()?;
    let kind = region_kind(p, s.is_critical())?;
    let tol = p.tol_or(0.1)?;
    let rep = maximal_inequality_probe(
        p.n_or(0),
        &s,
        p.a_or(1.0)?,
        kind,
        &maximal_test_suite(),
        &anchor_grid(p.anchors_or(16)?),
        &SampleNet::coarse(),
    )?;
    let mut t = CsvTable::new(&["test_id", "fitted_C", "refined_C"]);
    for ((id, c), (_, f)) in rep.ratios.iter().zip(&rep.refined_ratios) {
        t.push(cells([id.clone(), fmt_real(*c), fmt_real(*f)]));
    }
    t.push(cells(["suite".into(), fmt_real(rep.fitted_c), fmt_real(rep.refined_c)]));
    let change = rep.relative_change();
    Ok(Artifacts::table(t).check(change < tol, || format!("fitted C moved by {change:.4} under refinement")))
}

/// Approach sweeps inside the admissible regions at the anchors.
pub fn fatou(p: &Params) -> Outcome<Artifacts> {
    let s = p.spectral_off_ray()?;
    let datum = p.datum_or("cos:1", &[(0.0, 1.0)])?;
    let anchors = p.angles_or(vec![std::f64::consts::PI, std::f64::consts::FRAC_PI_2, -std::f64::consts::FRAC_PI_2])?;
    let rep = fatou_probe(p.n_or(0), &s, &datum, p.a_or(1.0)?, &anchors, &p.radii_or(radial_ladder(4))?)?;
    let mut t = CsvTable::new(&[
        "zeta_angle",
        "r",
        "alpha_offset",
        "value_re",
        "value_im",
        "normalized_re",
        "normalized_im",
        "error",
        "atom_contribution",
    ]);
    for row in &rep.rows {
        let w = &row.sample;
        let ([a, b], [c, d]) = (complex_cells(w.value), complex_cells(w.normalized));
        t.push(cells([
            fmt_real(w.zeta_angle),
            fmt_real(w.r),
            fmt_real(w.alpha_offset),
            a,
            b,
            c,
            d,
            fmt_real(row.error),
            fmt_real(row.atom_contribution),
        ]));
    }
    Ok(Artifacts::table(t))
}

/// The d-coefficients of P·log P with the logarithmic sandwich bounds.
pub fn examples(p: &Params) -> Outcome<Artifacts> {
    let top = p.n_or(10) as u64;
    let radii = p.radii_or(vec![0.3, 0.5, 0.7, 0.9, 0.99])?;
    let mut t = CsvTable::new(&["n", "r", "d_n", "log_lower", "upper", "upper_corrected"]);
    for n in 0..=top {
        for &r in &radii {
            t.push(cells([
                n.to_string(),
                fmt_real(r),
                fmt_real(d_coefficient(n, r)),
                fmt_real(log_inv_one_minus_r2(r)),
                fmt_real(dnlog_upper(n, r)),
                fmt_real(dnlog_upper_corrected(n, r)),
            ]));
        }
    }
    Ok(Artifacts::table(t))
}

/// Circle suprema of the lacunary function; the fitted spec goes to `--json`.
pub fn borichev(p: &Params) -> Outcome<Artifacts> {
    let stages = p.big_n_or(&[2, 3])?;
    let (spec, _) = runge_best_effort(RUNGE_BUDGET, 4);
    let mut t = CsvTable::new(&["N", "circle_radius", "sup_value"]);
    for n in stages {
        let c = borichev_circle_sup(n, &spec)?;
        t.push(cells([c.n.to_string(), fmt_real(c.circle_radius), fmt_real(c.sup_value)]));
    }
    Ok(Artifacts { table: t, json: Some(spec.to_json()), failed: None })
}

/// The acceptance suite; PASS/FAIL lines go to stderr, metrics to the table.
pub fn selftest(p: &Params) -> Outcome<Artifacts> {
    let seed = p.seed.unwrap_or(DEFAULT_SEED);
    let outcomes = match p.criterion {
        Some(id) => vec![run_one(id, seed).map_err(|e| Failure::Usage(format!("--criterion: {e}")))?],
        None => run_all(seed),
    };
    for o in &outcomes {
        eprintln!("{} criterion {:2} {}: {}", o.status(), o.id, o.name, o.detail);
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    Ok(Artifacts::table(outcomes_table(&outcomes)).check(failed == 0, || format!("{failed} criteria failed")))
}
