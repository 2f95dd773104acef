//! The ten acceptance criteria, each reported on one PASS/FAIL line.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use g2trac_core::boundary::{bgg_check, check_j0, extract_distribution, restrict_to_zero_locus};
use g2trac_core::chart::FrameChart;
use g2trac_core::family::{qm_h_display, qm_package, regression_set};
use g2trac_core::linalg::Mat;
use g2trac_core::npk::{compactness_of, npk_extract, npk_verify, Side};
use g2trac_core::octonion::{null_filtration, ImaginaryVector, Octonion, Xi};
use g2trac_core::stable::{act_on_form, classify6, form_inner, metric_from_3form7, normal_form6, phi_xi};
use g2trac_core::tensor::AltTensor;
use g2trac_core::tractor::{symmetrized_derivative, TractorConnection};
use g2trac_core::{CoeffFn, Param, QScalar, Ring};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    if t > limit {
        return Err(format!(
            "{what} took {:.2} s, limit {:.0} s",
            t.as_secs_f64(),
            limit.as_secs_f64()
        ));
    }
    Ok(())
}

fn q(n: i64) -> QScalar {
    QScalar::int(n)
}

fn small_rational(rng: &mut ChaCha8Rng) -> QScalar {
    QScalar::frac(rng.gen_range(-6..=6), rng.gen_range(1..=3))
}

fn random_imaginary(rng: &mut ChaCha8Rng, xi: Xi) -> ImaginaryVector {
    ImaginaryVector::new(std::array::from_fn(|_| small_rational(rng)), xi)
}

/// The imaginary multiplication table, row e_i, column e_j: ±k for ±e_k,
/// with a factor ξ when both indices are at least 4.
const TABLE: [[i32; 7]; 7] = [
    [0, 3, -2, 5, -4, 7, -6],
    [-3, 0, 1, 6, -7, -4, 5],
    [2, -1, 0, -7, -6, 5, 4],
    [-5, -6, 7, 0, 1, 2, -3],
    [4, 7, 6, -1, 0, -3, -2],
    [-7, 4, -5, -2, 3, 0, 1],
    [6, -5, -4, 3, 2, -1, 0],
];

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for xi in [Xi::Definite, Xi::Split] {
        for i in 0..7 {
            for j in 0..7 {
                if i == j {
                    continue;
                }
                let t = TABLE[i][j];
                let factor = if i >= 3 && j >= 3 { xi.sign() } else { 1 };
                let mut expect = [(); 8].map(|_| QScalar::zero());
                expect[t.unsigned_abs() as usize] = q(t.signum() as i64 * factor);
                let a = Octonion::basis(i + 1, xi);
                let b = Octonion::basis(j + 1, xi);
                let got = a.mul(&b).map_err(|e| e.to_string())?;
                ensure!(
                    got.c == expect,
                    "e{} e{} for ξ = {}: got {:?}",
                    i + 1,
                    j + 1,
                    xi.sign(),
                    got.c
                );
                checked += 1;
            }
        }
    }
    within(start, Duration::from_secs(1), "table")?;
    Ok(format!("{checked} products"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for xi in [Xi::Definite, Xi::Split] {
        for k in 0..500 {
            let x = random_imaginary(&mut rng, xi);
            let y = random_imaginary(&mut rng, xi);
            let c = x.cross(&y).map_err(|e| e.to_string())?;
            let d = |u: &ImaginaryVector, v: &ImaginaryVector| u.dot(v).expect("same ξ");
            ensure!(
                d(&c, &x).is_zero() && d(&c, &y).is_zero(),
                "orthogonality, pair {k}, ξ = {}",
                xi.sign()
            );
            let lagrange = d(&x, &x) * &d(&y, &y) - &(d(&x, &y) * &d(&x, &y));
            ensure!(d(&c, &c) == lagrange, "Lagrange identity, pair {k}, ξ = {}", xi.sign());
        }
    }
    within(start, Duration::from_secs(5), "cross product axioms")?;
    Ok("500 pairs per ξ".into())
}

fn random_gl(rng: &mut ChaCha8Rng, n: usize) -> Mat<QScalar> {
    loop {
        let rows = (0..n)
            .map(|_| (0..n).map(|_| q(rng.gen_range(-2..=2))).collect())
            .collect();
        let a = Mat::from_rows(rows);
        if !a.det().is_zero() {
            return a;
        }
    }
}

fn criterion_3() -> Outcome {
    for xi in [1, -1] {
        let phi = phi_xi(xi);
        let m = metric_from_3form7(&phi).map_err(|e| e.to_string())?;
        let h = m.h.ok_or("degenerate Φ_ξ")?;
        let expect = Mat::from_fn(7, 7, |i, j| {
            if i != j {
                q(0)
            } else if i < 3 {
                q(1)
            } else {
                q(xi)
            }
        });
        ensure!(h == expect, "H for ξ = {xi}");
        let norm = form_inner(&phi, &phi, &h).map_err(|e| e.to_string())?;
        ensure!(norm == q(42), "Φ·Φ = {norm} for ξ = {xi}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in 1..=6 {
        let beta = normal_form6(k);
        let c = classify6(&beta).map_err(|e| e.to_string())?;
        ensure!(c.class.index() == k, "β{k} classified as β{}", c.class.index());
        for _ in 0..50 {
            let g = random_gl(&mut rng, 6);
            let moved = classify6(&act_on_form(&beta, &g)).map_err(|e| e.to_string())?;
            ensure!(
                moved.class == c.class,
                "conjugate of β{k} classified as β{}",
                moved.class.index()
            );
        }
    }
    Ok("Φ_ξ metrics exact, 6 × 50 conjugates".into())
}

/// x − 2 (x·r)/(r·r) r.
fn reflect(x: &ImaginaryVector, r: &ImaginaryVector) -> ImaginaryVector {
    let rr = r.dot(r).expect("same ξ");
    let f = x.dot(r).expect("same ξ") * &q(2) * &rr.inv().expect("non-null mirror");
    x.sub(&r.scale(&f))
}

fn criterion_4() -> Outcome {
    let xi = Xi::Split;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut count = 0;
    while count < 100 {
        let (i, j) = (rng.gen_range(0..3), rng.gen_range(3..7));
        let mut x =
            ImaginaryVector::basis(i, xi).add(&ImaginaryVector::basis(j, xi).scale(&q(if rng.gen() { 1 } else { -1 })));
        for _ in 0..3 {
            let r = random_imaginary(&mut rng, xi);
            if !r.dot(&r).unwrap().is_zero() {
                x = reflect(&x, &r);
            }
        }
        ensure!(x.is_null() && !x.is_zero(), "reflection left the null cone");
        let f = null_filtration(&x).map_err(|e| e.to_string())?;
        ensure!(f.dims() == (1, 3, 4, 6), "dims {:?} for {:?}", f.dims(), x.c);
        for u in &f.kernel {
            for v in &f.kernel {
                let (u, v) = (ImaginaryVector::from_slice(u, xi), ImaginaryVector::from_slice(v, xi));
                ensure!(u.dot(&v).unwrap().is_zero(), "ker J_x not isotropic");
            }
        }
        count += 1;
    }
    Ok(format!("{count} null vectors"))
}

fn criterion_5() -> Outcome {
    let mut slowest = Duration::ZERO;
    for p in regression_set() {
        let start = Instant::now();
        let pkg = qm_package(&p).map_err(|e| e.to_string())?;
        let dphi = pkg.tractor.derivative_covariant(&pkg.phi);
        ensure!(
            dphi.len() == 6 && dphi.iter().all(|t| t.dim() == 7 && t.valence() == (0, 3)),
            "shape of ∇Φ"
        );
        let equations = dphi.len() * g2trac_core::tensor::combinations(7, 3).len();
        ensure!(equations == 6 * 35, "equation count");
        ensure!(dphi.iter().all(AltTensor::is_zero), "∇Φ ≠ 0 for m = {}", p.m);
        ensure!(pkg.tau == CoeffFn::rho(Param::Rho).scale(&q(2)), "τ for m = {}", p.m);
        ensure!(pkg.h == qm_h_display(&p), "H for m = {}", p.m);
        let jf = pkg.jfield();
        ensure!(
            jf.jx.is_zero() && jf.jj_squared.is_zero(),
            "𝕁 identities for m = {}",
            p.m
        );
        within(start, Duration::from_secs(60), &format!("m = {}", p.m))?;
        slowest = slowest.max(start.elapsed());
    }
    Ok(format!("slowest m took {:.2} s", slowest.as_secs_f64()))
}

fn criterion_6() -> Outcome {
    for p in regression_set() {
        let pkg = qm_package(&p).map_err(|e| e.to_string())?;
        for side in [Side::Plus, Side::Minus] {
            let tag = format!("m = {} on {}", p.m, side.label());
            let st = npk_extract(&pkg, side).map_err(|e| e.to_string())?;
            let r = npk_verify(&st).map_err(|e| e.to_string())?;
            ensure!(r.killing_yano.is_zero(), "KY residual, {tag}");
            ensure!(r.alpha.is_some() && r.einstein.is_zero(), "Einstein, {tag}");
            ensure!(
                r.scalar_sign() == Some(side.sign() as i32),
                "scalar curvature {} for {tag}",
                r.scalar_curvature
            );
            ensure!(r.weyl_identity.is_zero(), "Weyl identity, {tag}");
            ensure!(r.nabla_j_norm_constant(), "⟨∇J,∇J⟩ = {} for {tag}", r.nabla_j_norm);
        }
    }
    Ok("both orbits for every m".into())
}

fn criterion_7() -> Outcome {
    for p in regression_set() {
        let pkg = qm_package(&p).map_err(|e| e.to_string())?;
        let zl = restrict_to_zero_locus(&pkg).map_err(|e| e.to_string())?;
        ensure!(zl.signature == (2, 3), "signature {:?} for m = {}", zl.signature, p.m);
        ensure!(check_j0(&zl).pass(), "J₀ for m = {}", p.m);
        let d = extract_distribution(&zl).map_err(|e| e.to_string())?;
        ensure!(
            g2trac_core::linalg::same_span(&d.d, &d.d_from_omega),
            "im J₀ ≠ ker ω for m = {}",
            p.m
        );
        ensure!(d.matches_frame(&[3, 4], &[2, 3, 4]), "D ≠ ⟨E₄,E₅⟩ for m = {}", p.m);
        ensure!(d.d_perp_is_dd && d.is_235(), "D⊥ / growth for m = {}", p.m);
        let bgg = bgg_check(&zl);
        ensure!(bgg.round_trip.is_zero(), "BGG round trip for m = {}", p.m);
    }
    Ok("signature (2,3), D agrees three ways, BGG reproduces Φ₀".into())
}

fn criterion_8() -> Outcome {
    for p in regression_set() {
        let pkg = qm_package(&p).map_err(|e| e.to_string())?;
        for side in [Side::Plus, Side::Minus] {
            let st = npk_extract(&pkg, side).map_err(|e| e.to_string())?;
            let two = compactness_of(&st, 2).map_err(|e| e.to_string())?;
            let one = compactness_of(&st, 1).map_err(|e| e.to_string())?;
            ensure!(two.regular, "order 2 fails for m = {} on {}", p.m, side.label());
            ensure!(
                one.worst_pole.is_some(),
                "order 1 passes for m = {} on {}",
                p.m,
                side.label()
            );
        }
    }
    Ok("order 2 regular, order 1 singular".into())
}

fn criterion_9() -> Outcome {
    let mut flat = Vec::new();
    for p in regression_set() {
        let pkg = qm_package(&p).map_err(|e| e.to_string())?;
        let is_flat = pkg.tractor.curvature_residual().is_zero();
        ensure!(is_flat == p.is_flat_value(), "m = {}: flat = {is_flat}", p.m);
        if is_flat {
            flat.push(g2trac_core::scalar::rat_string(&p.m));
        }
    }
    ensure!(flat == ["-1", "1/3", "2/3", "2"], "flat set {flat:?}");
    Ok(format!("flat exactly for m in {{{}}}", flat.join(", ")))
}

fn random_poly(rng: &mut ChaCha8Rng) -> CoeffFn {
    CoeffFn::from_terms(Param::Rho, (0..3).map(|k| (k, QScalar::int(rng.gen_range(-3..=3)))))
}

fn criterion_10() -> Outcome {
    let chart = FrameChart::flat(6, Param::Rho);
    let tractor = TractorConnection::from_special(&chart);
    let weyl = chart.curvature().weyl;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let third = QScalar::frac(2, 3);
    let half = QScalar::frac(1, 2);
    for k in 0..50 {
        let mut w = AltTensor::form(6, 2);
        for idx in g2trac_core::tensor::combinations(6, 2) {
            if rng.gen_bool(0.5) {
                w.set(&idx, random_poly(&mut rng));
            }
        }
        let ky = tractor.ky_prolong(&w, &weyl);
        let s = symmetrized_derivative(&chart, &w);
        for a in 0..6 {
            for b in 0..6 {
                for c in 0..6 {
                    let t = |x: usize, y: usize, z: usize| ky.top[x].get(&[y, z]);
                    // T_abc = (2/3)(S_abc − S_acb) and S_abc = ½(T_abc + T_bac)
                    let from_s = (s.get(&[a, b, c]) - &s.get(&[a, c, b])).scale(&third);
                    ensure!(t(a, b, c) == from_s, "form {k}: T_{a}{b}{c}");
                    let from_t = (t(a, b, c) + &t(b, a, c)).scale(&half);
                    ensure!(s.get(&[a, b, c]) == from_t, "form {k}: S_{a}{b}{c}");
                }
            }
        }
        let top_zero = ky.top.iter().all(AltTensor::is_zero);
        ensure!(
            top_zero == s.is_zero(),
            "form {k}: KY part of the residual disagrees with ∇_(a ω_b)c"
        );
    }
    Ok("50 random forms".into())
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("multiplication table", criterion_1),
        ("cross product axioms", criterion_2),
        ("stable form dictionary", criterion_3),
        ("null filtration", criterion_4),
        ("q^m exact verification", criterion_5),
        ("nearly (para-)Kähler verification", criterion_6),
        ("boundary geometry", criterion_7),
        ("projective compactness", criterion_8),
        ("flat/nonflat discrimination", criterion_9),
        ("prolongation oracle", criterion_10),
    ];
    let mut failed = Vec::new();
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.2} s)", k + 1),
            Err(why) => {
                println!("criterion {:>2} FAIL  {name}: {why} ({secs:.2} s)", k + 1);
                failed.push(k + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
