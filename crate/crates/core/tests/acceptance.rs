//! The ten acceptance criteria. Prints one PASS/FAIL line each and exits
//! non-zero if any fails.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Signed;

use knotvol::asymfit::{main_claim_report, FitWindow};
use knotvol::cyclo::exact_invariant;
use knotvol::invariant::{kashaev_invariant, kashaev_invariant_with, EvalConfig, EvalMode};
use knotvol::qdilog::{
    f_bar_gamma, f_gamma, faddeev_s, im_li2_polar, li2, lobachevsky, PolarPoint, QdParams,
};
use knotvol::saddle::{hyperbolic_volume, potential};
use knotvol::KnotId;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn alexander() -> Outcome {
    let mut worst = 0.0f64;
    let mut exact_ok = true;
    for knot in KnotId::ALL {
        let want = knot.alexander_at_minus_one();
        let exact = exact_invariant(knot, 2).map_err(|e| e.to_string())?;
        let r = exact.as_rational().ok_or("N = 2 value not rational")?;
        exact_ok &= r.abs() == BigRational::from_integer(want.into());
        for mode in [EvalMode::Direct, EvalMode::Logscale] {
            let v = kashaev_invariant(knot, 2, mode).map_err(|e| e.to_string())?;
            let abs = v.plain().ok_or("not representable")?.norm();
            worst = worst.max((abs - want as f64).abs());
        }
    }
    check(
        exact_ok && worst <= 1e-12,
        format!("exact equal: {exact_ok}, float dev {worst:.1e} (tol 1e-12)"),
    )
}

fn oracle_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    for knot in KnotId::ALL {
        for n in 1..=20 {
            let exact = exact_invariant(knot, n)
                .map_err(|e| e.to_string())?
                .evaluate_numeric();
            let v = kashaev_invariant(knot, n, EvalMode::Logscale).map_err(|e| e.to_string())?;
            let v = v.plain().ok_or("not representable")?;
            worst = worst.max((v - exact).norm() / exact.norm());
        }
    }
    check(
        worst <= 1e-9,
        format!("worst relative dev {worst:.1e} (tol 1e-9)"),
    )
}

fn saddle_volumes() -> Outcome {
    let targets = [
        (KnotId::FourOne, 2.029_883_21),
        (KnotId::FiveTwo, 2.828_122_08),
        (KnotId::SixOne, 3.163_963_22),
    ];
    let mut parts = Vec::new();
    let mut ok = true;
    for (knot, want) in targets {
        let v = hyperbolic_volume(knot).map_err(|e| e.to_string())?.volume;
        ok &= (v - want).abs() <= 1e-6;
        parts.push(format!("V({knot}) = {v:.10}"));
    }
    check(ok, format!("{} (tol 1e-6)", parts.join(", ")))
}

fn triple_route() -> Outcome {
    let a = hyperbolic_volume(KnotId::FourOne)
        .map_err(|e| e.to_string())?
        .volume;
    let b = 4.0 * lobachevsky(PI / 6.0);
    let c = 2.0 * li2(Complex64::from_polar(1.0, PI / 3.0)).im;
    let spread = (a - b).abs().max((a - c).abs()).max((b - c).abs());
    check(
        spread <= 1e-10,
        format!("pairwise spread {spread:.1e} (tol 1e-10)"),
    )
}

fn main_claim() -> Outcome {
    let cases = [
        (KnotId::FourOne, FitWindow::new(50, 300, 10), 0.01),
        (KnotId::FiveTwo, FitWindow::new(30, 150, 10), 0.02),
        (KnotId::SixOne, FitWindow::new(20, 100, 10), 0.05),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (knot, w, tol) in cases {
        let r = main_claim_report(knot, w).map_err(|e| e.to_string())?;
        ok &= r.rel_gap <= tol && r.gap_shrinks;
        parts.push(format!(
            "{knot} [{},{}] gap {:.2e} (tol {tol}) -> {:.2e} at 2*N_min",
            w.n_min, w.n_max, r.rel_gap, r.shifted_rel_gap
        ));
    }
    check(ok, parts.join("; "))
}

fn functional_equation() -> Outcome {
    let mut worst = 0.0f64;
    for gamma in [PI / 5.0, PI / 10.0] {
        let q = QdParams::new(gamma).map_err(|e| e.to_string())?;
        for i in 0..20 {
            let p = -PI + gamma + 2.0 * (PI - gamma) * (i as f64 + 0.5) / 20.0;
            let s = |x: f64| faddeev_s(&q, Complex64::new(x, 0.0)).map_err(|e| e.to_string());
            let lhs = (1.0 + Complex64::new(0.0, p).exp()) * s(p + gamma)?;
            let rhs = s(p - gamma)?;
            worst = worst.max((lhs - rhs).norm() / rhs.norm());
        }
    }
    check(
        worst <= 1e-6,
        format!("worst residual {worst:.1e} (tol 1e-6)"),
    )
}

fn continuation_identity() -> Outcome {
    let n = 10u64;
    let q = QdParams::for_order(n).map_err(|e| e.to_string())?;
    let gamma = PI / n as f64;
    let mut worst = 0.0f64;
    for k in 0..n {
        // (ω)_k as an explicit product
        let poch: Complex64 = (1..=k)
            .map(|j| 1.0 - Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64))
            .product();
        let p = Complex64::new(-PI + gamma + 2.0 * k as f64 * gamma, 0.0);
        let f = f_gamma(&q, p).map_err(|e| e.to_string())?;
        let fb = f_bar_gamma(&q, p).map_err(|e| e.to_string())?;
        worst = worst.max((f - poch).norm()).max((fb - poch.conj()).norm());
    }
    check(
        worst <= 1e-6,
        format!("worst dev {worst:.1e} over k = 0..9 (tol 1e-6)"),
    )
}

fn polar_formula() -> Outcome {
    let mut worst = 0.0f64;
    let mut worst_series = 0.0f64;
    for i in 1..=10 {
        for j in 1..=30 {
            let (r, t) = (i as f64 / 10.0, j as f64 / 10.0);
            let v = im_li2_polar(PolarPoint::new(r, t).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            worst = worst.max((v - li2(Complex64::from_polar(r, t)).im).abs());
            if r <= 0.9 {
                // Σ rⁿ sin(nθ)/n²
                let s: f64 = (1..2000)
                    .rev()
                    .map(|n| r.powi(n) * (n as f64 * t).sin() / (n * n) as f64)
                    .sum();
                worst_series = worst_series.max((v - s).abs());
            }
        }
    }
    check(
        worst <= 1e-10 && worst_series <= 1e-10,
        format!(
            "vs transformations {worst:.1e}, vs series (r <= 0.9) {worst_series:.1e} (tol 1e-10)"
        ),
    )
}

fn determinism() -> Outcome {
    let eval = |t| {
        kashaev_invariant_with(
            KnotId::SixOne,
            60,
            &EvalConfig::new(EvalMode::Logscale).with_threads(t),
        )
        .map_err(|e| e.to_string())
    };
    let base = eval(1)?;
    let bits = |v: &knotvol::invariant::InvariantValue| {
        (v.value.log_mag().to_bits(), v.value.arg().to_bits())
    };
    let same = [2, 8]
        .into_iter()
        .map(eval)
        .collect::<Result<Vec<_>, _>>()?
        .iter()
        .all(|v| bits(v) == bits(&base));
    check(
        same,
        format!(
            "6_1 N=60 log|<L>| = {} identical for 1, 2, 8 workers: {same}",
            base.log_abs()
        ),
    )
}

fn gradient() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for knot in KnotId::ALL {
        let pt = hyperbolic_volume(knot)
            .map_err(|e| e.to_string())?
            .solution
            .point;
        let w = |x: &[Complex64]| {
            potential(knot, x)
                .map(|p| p.value)
                .map_err(|e| e.to_string())
        };
        let mut norm2 = 0.0;
        for j in 0..pt.len() {
            let h = 1e-6;
            let (mut a, mut b) = (pt.clone(), pt.clone());
            a[j] += h;
            b[j] -= h;
            norm2 += ((w(&a)? - w(&b)?) / (2.0 * h)).norm_sqr();
        }
        let norm = norm2.sqrt();
        ok &= norm <= 1e-6;
        parts.push(format!("{knot} {norm:.1e}"));
    }
    check(ok, format!("{} (tol 1e-6)", parts.join(", ")))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 Alexander values at N=2", alexander),
        ("2 logscale vs exact oracle, N<=20", oracle_equivalence),
        ("3 saddle volumes", saddle_volumes),
        ("4 4_1 triple-route volume", triple_route),
        ("5 growth fit vs volume", main_claim),
        ("6 Faddeev functional equation", functional_equation),
        (
            "7 continuation to Pochhammer symbols",
            continuation_identity,
        ),
        ("8 Im Li2 polar formula grid", polar_formula),
        ("9 determinism across workers", determinism),
        ("10 saddle gradient", gradient),
    ];
    let mut failures = 0;
    for (name, f) in criteria {
        let t = Instant::now();
        let outcome = f();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("PASS  {name:<40} {d}  [{secs:.2}s]"),
            Err(d) => {
                failures += 1;
                println!("FAIL  {name:<40} {d}  [{secs:.2}s]");
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", 10 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
