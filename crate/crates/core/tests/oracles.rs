//! Checks against values computed independently of the library: brute-force
//! number theory, classical constants, and closed forms.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::f64::consts::PI;

use cycle_integrals::bqf::{enumerate_classes, frame, is_square, pell_fundamental, IntMatrix, QuadForm};
use cycle_integrals::cycle::cycle_integral;
use cycle_integrals::forms::{divisor_sigma, Family, FamilyParams, QExpansion};
use cycle_integrals::Complex64;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Smallest `u > 0` with `D·u² + 4` a perfect square, searched up to `cap`.
fn brute_pell(d: i64, cap: i64) -> Option<(i64, i64)> {
    (1..=cap).find_map(|u| {
        let t2 = d as i128 * (u as i128) * (u as i128) + 4;
        let t = (t2 as f64).sqrt().round() as i128;
        [t - 1, t, t + 1].into_iter().find(|t| t * t == t2).map(|t| (t as i64, u))
    })
}

/// Least `X + Y√D > 1` with `X² - D·Y² = 1`, from the continued fraction of `√D`.
fn pell_one_by_continued_fraction(d: i64) -> (BigInt, BigInt) {
    let a0 = (d as f64).sqrt().floor() as i64;
    let a0 = (a0 - 1..=a0 + 1).filter(|r| r * r <= d).max().unwrap();
    let (mut m, mut q, mut a) = (0i64, 1i64, a0);
    let (mut h_prev, mut h) = (BigInt::one(), BigInt::from(a0));
    let (mut k_prev, mut k) = (BigInt::zero(), BigInt::one());
    loop {
        if &h * &h - BigInt::from(d) * &k * &k == BigInt::one() {
            return (h, k);
        }
        m = q * a - m;
        q = (d - m * m) / q;
        a = (a0 + m) / q;
        let h_next = BigInt::from(a) * &h + &h_prev;
        let k_next = BigInt::from(a) * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
    }
}

/// `u` with `D·u² = t² - 4`, if it is a positive integer.
fn u_for(d: i64, t: &BigInt) -> Option<BigInt> {
    let n = t * t - BigInt::from(4);
    if n.is_negative() || !(&n % d).is_zero() {
        return None;
    }
    let u2 = n / d;
    let u = u2.sqrt();
    (&u * &u == u2 && u.is_positive()).then_some(u)
}

/// Fundamental solution of `t² - D·u² = 4` derived from the `= 1` solution:
/// `η = (t + u√D)/2` is the least unit, and `η`, `η²` or `η³` equals
/// `X + Y√D`. The cube and square roots are tested exactly through
/// `t³ - 3t = 2X` and `t² - 2 = 2X`.
fn pell_four_oracle(d: i64) -> (BigInt, BigInt) {
    let (x, y) = pell_one_by_continued_fraction(d);
    let two_x = &x * BigInt::from(2);
    let c = two_x.cbrt();
    for t in [&c - 1, c.clone(), &c + 1] {
        if t.is_positive() && &t * &t * &t - BigInt::from(3) * &t == two_x {
            if let Some(u) = u_for(d, &t) {
                return (t, u);
            }
        }
    }
    let t2 = &two_x + BigInt::from(2);
    let t = t2.sqrt();
    if &t * &t == t2 {
        if let Some(u) = u_for(d, &t) {
            return (t, u);
        }
    }
    (two_x, y * BigInt::from(2))
}

#[test]
fn pell_matches_brute_force_up_to_2000() {
    let cap = 200_000;
    let (mut brute, mut by_cf) = (0, 0);
    for d in 2..=2000i64 {
        if is_square(d) {
            continue;
        }
        let (t, u) = pell_fundamental(d).unwrap();
        assert_eq!(&t * &t - BigInt::from(d) * &u * &u, BigInt::from(4), "D = {d}");
        match brute_pell(d, cap) {
            Some((bt, bu)) => {
                assert_eq!((t.to_i64(), u.to_i64()), (Some(bt), Some(bu)), "D = {d}");
                brute += 1;
            }
            None => {
                assert!(u > BigInt::from(cap), "D = {d}: u = {u} missed by the search");
                by_cf += 1;
            }
        }
        assert_eq!((t, u), pell_four_oracle(d), "D = {d}");
    }
    println!("Pell: {brute} discriminants by exhaustive search, {by_cf} beyond u = {cap} by continued fractions");
}

/// Proper classes by flood fill over `T^{±1}` and `S` inside a coefficient box.
fn brute_class_count(d: i64, bound: i64) -> usize {
    let mut forms = Vec::new();
    for a in -bound..=bound {
        for b in -bound..=bound {
            if a == 0 || (b * b - d) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b - d) / (4 * a);
            if c.abs() <= bound {
                forms.push((a, b, c));
            }
        }
    }
    let inside: HashSet<_> = forms.iter().copied().collect();
    let moves = |(a, b, c): (i64, i64, i64)| {
        [(a, b + 2 * a, a + b + c), (a, b - 2 * a, a - b + c), (c, -b, a)]
    };
    let mut seen = HashSet::new();
    let mut classes = 0;
    for f in &forms {
        if !seen.insert(*f) {
            continue;
        }
        classes += 1;
        let mut queue = VecDeque::from([*f]);
        while let Some(g) = queue.pop_front() {
            for h in moves(g) {
                if inside.contains(&h) && seen.insert(h) {
                    queue.push_back(h);
                }
            }
        }
    }
    classes
}

#[test]
fn class_counts_match_brute_force() {
    for (d, expected) in [(5, 1), (8, 1), (13, 1), (12, 2)] {
        let brute = brute_class_count(d, 40);
        assert_eq!(brute, expected, "brute force for D = {d}");
        assert_eq!(enumerate_classes(d).unwrap().len(), brute, "D = {d}");
    }
}

#[test]
fn class_representatives_are_pairwise_inequivalent() {
    for d in [12, 40, 60, 65, 85, 145] {
        let reps = enumerate_classes(d).unwrap();
        let brute = brute_class_count(d, 60);
        assert_eq!(reps.len(), brute, "D = {d}");
        let set: BTreeSet<_> = reps.iter().collect();
        assert_eq!(set.len(), reps.len());
    }
}

/// `Q(αX + βY, γX + δY)` recovered from three values of the polynomial.
fn substituted(q: &QuadForm, m: &IntMatrix) -> QuadForm {
    let ev = |x: i64, y: i64| q.a * x * x + q.b * x * y + q.c * y * y;
    let a = ev(m.a, m.c);
    let c = ev(m.b, m.d);
    let b = ev(m.a + m.b, m.c + m.d) - a - c;
    QuadForm::new(a, b, c)
}

#[test]
fn action_matches_substitution_and_automorph_is_exact() {
    let mats = [IntMatrix::S, IntMatrix::T, IntMatrix::new(2, 1, 1, 1), IntMatrix::new(5, -3, 2, -1), IntMatrix::new(-7, 4, -2, 1)];
    for d in [5, 8, 12, 13, 17, 21, 60, 61, 1000] {
        for q in enumerate_classes(d).unwrap() {
            for m in &mats {
                assert_eq!(q.act(m).unwrap(), substituted(&q, m));
            }
            let fr = frame(&q).unwrap();
            assert_eq!(substituted(&q, &fr.automorph), q, "automorph of {q}");
            assert_eq!(q.act(&fr.automorph).unwrap(), q);
        }
    }
}

#[test]
fn divisor_sums_match_trial_division() {
    for (k, limit) in [(1u32, 300u64), (3, 300), (5, 300), (11, 50)] {
        for n in 1..limit {
            let brute: u64 = (1..=n).filter(|d| n % d == 0).map(|d| d.pow(k)).sum();
            assert_eq!(divisor_sigma(k, n), brute);
        }
    }
}

#[test]
fn ramanujan_tau_values() {
    let tau = [1.0, -24.0, 252.0, -1472.0, 4830.0, -6048.0, -16744.0, 84480.0, -113643.0, -115920.0];
    let delta = QExpansion::standard("Delta", 12).unwrap();
    let terms = delta.to_terms();
    for (n, t) in tau.iter().enumerate() {
        let m = (n + 1) as f64;
        let c = terms
            .atoms()
            .iter()
            .find(|a| (a.alpha.im - 2.0 * PI * m).abs() < 1e-9)
            .map(|a| a.coeff.re)
            .unwrap_or(0.0);
        assert!((c - t).abs() < 1e-6 * t.abs(), "tau({}) = {c}", n + 1);
    }
}

#[test]
fn special_values_at_i() {
    let p = FamilyParams::default();
    let z = Complex64::new(0.0, 1.0);
    let gamma_quarter: f64 = 3.625_609_908_221_908;
    let e4 = QExpansion::standard("E4", 40).unwrap().eval(z);
    let want = 3.0 * gamma_quarter.powi(8) / (2.0 * PI).powi(6);
    assert!((e4.re - want).abs() < 1e-12 * want, "{e4} {want}");
    let e6 = QExpansion::standard("E6", 40).unwrap().eval(z);
    assert!(e6.norm() < 1e-12);
    let e2 = QExpansion::standard("E2", 40).unwrap().eval(z);
    assert!((e2.re - 3.0 / PI).abs() < 1e-12);
    let e2s = Family::E2Star.build(&p).unwrap().eval(z).unwrap();
    assert!(e2s.norm() < 1e-12);
}

/// `β(s) = Σ (-1)^n (2n+1)^(-s)`, averaged over two consecutive partial
/// sums to cancel the leading alternating error.
fn dirichlet_beta(s: f64) -> f64 {
    let n = 2_000_000;
    let mut sum = 0.0;
    let mut prev = 0.0;
    for k in 0..=n {
        prev = sum;
        let term = (2.0 * k as f64 + 1.0).powf(-s);
        sum += if k % 2 == 0 { term } else { -term };
    }
    0.5 * (sum + prev)
}

#[test]
fn real_analytic_eisenstein_at_i() {
    // E(i, s) = 2 ζ(s) β(s) / ζ(2s) from the Epstein zeta of Z[i].
    let zeta_15 = 2.612_375_348_685_488;
    let zeta_3 = 1.202_056_903_159_594_2;
    let want = 2.0 * zeta_15 * dirichlet_beta(1.5) / zeta_3;
    let f = Family::RealAnalytic { s: 1.5 }.build(&FamilyParams::default()).unwrap();
    let got = f.eval(Complex64::new(0.0, 1.0)).unwrap();
    assert!((got.re - want).abs() < 1e-8 * want && got.im.abs() < 1e-10, "{got} {want}");
}

#[test]
fn holomorphic_lattice_sum_matches_q_expansion() {
    let p = FamilyParams { n: Some(200), ..Default::default() };
    let f = Family::Holomorphic { weight: 4 }.build(&p).unwrap();
    let q = QExpansion::standard("E4", 40).unwrap();
    for z in [Complex64::new(0.1, 1.0), Complex64::new(-0.3, 1.4)] {
        let a = f.eval(z).unwrap();
        let b = q.eval(z);
        assert!((a - b).norm() < 1e-8 * b.norm(), "{a} {b}");
    }
}

#[test]
fn constant_cycle_integral_is_the_geodesic_length() {
    for (q, eps) in [
        (QuadForm::new(1, 0, -2), 3.0 + 8f64.sqrt()),
        (QuadForm::new(1, 1, -1), (3.0 + 5f64.sqrt()) / 2.0),
        (QuadForm::new(1, 1, -3), (11.0 + 3.0 * 13f64.sqrt()) / 2.0),
    ] {
        let f = Family::Constant(1.0).build(&FamilyParams::default()).unwrap();
        let got = cycle_integral(&f, &q, 1e-11).unwrap().value;
        let want = 2.0 * eps.ln();
        assert!((got.re - want).abs() < 1e-12 * want && got.im.abs() < 1e-14, "{q}: {got} {want}");
    }
}
