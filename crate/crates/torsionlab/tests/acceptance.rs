//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line. Expected values are frozen from the worked tables and the stated
//! oracles; randomized suites run under fixed seeds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::time::Instant;
use torsionlab::arith::big;
use torsionlab::dataset::load_embedded;
use torsionlab::ecurve::{
    galois_square_units, order_criteria, torsion_subgroup, torsion_subgroup_ext, twist_curve,
    Curve, CriterionWitness, GroupShape, Point,
};
use torsionlab::qfield::{parse_elem, FieldTag, QuadElem, ALL_D, S_D};
use torsionlab::tower::TowerTag;
use torsionlab::twistlab::{self, z4z4_criterion};
use torsionlab::verify::{run_verify, summarize, CheckStatus, VerifyOptions};

fn shape(m: u64, n: u64) -> GroupShape {
    GroupShape::new(m, n)
}

fn tagged(d: i64) -> FieldTag {
    FieldTag::new(d).unwrap()
}

fn curve_from(d: i64, alpha: &str, beta: &str) -> (FieldTag, Curve<QuadElem>) {
    let tag = tagged(d);
    let a = parse_elem(alpha, tag).unwrap();
    let b = parse_elem(beta, tag).unwrap();
    (tag, Curve::new(a, b).unwrap())
}

struct GrowthRow {
    d_field: i64,
    alpha: &'static str,
    beta: &'static str,
    twist_d: &'static str,
    expect_twist: (u64, u64),
    expect_ext: (u64, u64),
}

fn check_growth_row(row: &GrowthRow) {
    let (tag, curve) = curve_from(row.d_field, row.alpha, row.beta);
    let d = parse_elem(row.twist_d, tag).unwrap();
    let ext = torsion_subgroup_ext(&curve, tag, &d).unwrap();
    assert_eq!(
        ext.twist.shape,
        shape(row.expect_twist.0, row.expect_twist.1),
        "twist mismatch for ({}, {}) d = {} over D = {}",
        row.alpha,
        row.beta,
        row.twist_d,
        row.d_field
    );
    assert_eq!(
        ext.ext.shape,
        shape(row.expect_ext.0, row.expect_ext.1),
        "extension mismatch for ({}, {}) d = {} over D = {}",
        row.alpha,
        row.beta,
        row.twist_d,
        row.d_field
    );
}

#[test]
fn criterion_1_fast_table_reproduction() {
    let start = Instant::now();
    let mut rows = vec![
        GrowthRow {
            d_field: -7,
            alpha: "(42525*w - 44415)/2",
            beta: "(-42525*w - 44415)/2",
            twist_d: "-15",
            expect_twist: (2, 8),
            expect_ext: (2, 16),
        },
        GrowthRow {
            d_field: -2,
            alpha: "-1",
            beta: "-2",
            twist_d: "-1",
            expect_twist: (2, 2),
            expect_ext: (4, 4),
        },
        GrowthRow {
            d_field: -2,
            alpha: "3600",
            beta: "3645",
            twist_d: "-5",
            expect_twist: (2, 4),
            expect_ext: (2, 8),
        },
        GrowthRow {
            d_field: -7,
            alpha: "68121",
            beta: "69696",
            twist_d: "-1",
            expect_twist: (2, 4),
            expect_ext: (4, 4),
        },
        GrowthRow {
            d_field: -7,
            alpha: "(21*w - 39)/2",
            beta: "(-21*w - 39)/2",
            twist_d: "-3",
            expect_twist: (2, 6),
            expect_ext: (6, 6),
        },
        GrowthRow {
            d_field: -11,
            alpha: "-78056*w + 405752",
            beta: "-27648*w + 857088",
            twist_d: "-3",
            expect_twist: (2, 6),
            expect_ext: (6, 6),
        },
        GrowthRow {
            d_field: -7,
            alpha: "729",
            beta: "2304",
            twist_d: "-1",
            expect_twist: (2, 4),
            expect_ext: (4, 8),
        },
        GrowthRow {
            d_field: -7,
            alpha: "(93*w + 449)/2",
            beta: "24*w - 248",
            twist_d: "-15",
            expect_twist: (2, 2),
            expect_ext: (2, 16),
        },
    ];
    for d in S_D {
        rows.push(GrowthRow {
            d_field: d,
            alpha: "64",
            beta: "189",
            twist_d: "21",
            expect_twist: (2, 2),
            expect_ext: (2, 12),
        });
    }
    rows.par_iter().for_each(check_growth_row);
    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 60.0, "fast set took {secs:.1}s, target < 60s");
    println!("[PASS] criterion 1: fast table reproduction ({} rows, {secs:.2}s)", rows.len());
}

#[test]
fn criterion_2_slow_table_reproduction() {
    let start = Instant::now();
    let rows = [
        GrowthRow {
            d_field: -19,
            alpha: "10993263062353152*w - 37976902494666157",
            beta: "-10437125916000000*w + 40849621725921875",
            twist_d: "-3",
            expect_twist: (2, 6),
            expect_ext: (6, 6),
        },
        GrowthRow {
            d_field: -19,
            alpha: "(1160294229092597760*w - 755235215206514688)/806954491",
            beta: "-215373816000*w + 140186761425",
            twist_d: "-3",
            expect_twist: (2, 4),
            expect_ext: (2, 12),
        },
    ];
    rows.par_iter().for_each(check_growth_row);
    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 900.0, "slow set took {secs:.1}s, target < 15min");
    println!("[PASS] criterion 2: slow table reproduction (both D=-19 rows, {secs:.2}s)");
}

#[test]
fn criterion_3_auxiliary_curve_torsion() {
    let ds = load_embedded();
    let checks = run_verify(
        &ds,
        &VerifyOptions {
            slow: false,
            tables: Some(vec!["aux".to_string()]),
        },
    );
    let (pass, fail, _skip) = summarize(&checks);
    for c in checks.iter().filter(|c| c.status == CheckStatus::Fail) {
        eprintln!("FAILED: {} -- {}", c.name, c.detail);
    }
    assert_eq!(fail, 0, "auxiliary curve checks failed");
    assert!(pass >= 19); // 4 + 3 E0 cases, 6 E1, 6 E2
    println!("[PASS] criterion 3: auxiliary curve torsion ({pass} checks)");
}

#[test]
fn criterion_4_lemma_table() {
    let ds = load_embedded();
    let checks = run_verify(
        &ds,
        &VerifyOptions {
            slow: false,
            tables: Some(vec!["lemma41".to_string()]),
        },
    );
    let (pass, fail, _) = summarize(&checks);
    for c in checks.iter().filter(|c| c.status == CheckStatus::Fail) {
        eprintln!("FAILED: {} -- {}", c.name, c.detail);
    }
    assert_eq!(fail, 0);
    let rows = checks
        .iter()
        .filter(|c| c.name.starts_with("phi-inverse table row"))
        .count();
    assert_eq!(rows, 16, "all sixteen rows must be verified");
    println!("[PASS] criterion 4: determination table, identities and loci ({pass} checks)");
}

#[test]
fn criterion_5_finite_field_jacobians() {
    let start = Instant::now();
    let ds = load_embedded();
    // slow: true also runs the F_25 full-enumeration cross-check.
    let checks = run_verify(
        &ds,
        &VerifyOptions {
            slow: true,
            tables: Some(vec!["jacobians".to_string()]),
        },
    );
    let (pass, fail, _) = summarize(&checks);
    for c in checks.iter().filter(|c| c.status == CheckStatus::Fail) {
        eprintln!("FAILED: {} -- {}", c.name, c.detail);
    }
    assert_eq!(fail, 0);
    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 120.0, "jacobian checks took {secs:.1}s, target < 2min");
    println!("[PASS] criterion 5: finite-field Jacobians and gcd bounds ({pass} checks, {secs:.2}s)");
}

#[test]
fn criterion_6_modular_curve_checks() {
    let ds = load_embedded();
    let checks = run_verify(
        &ds,
        &VerifyOptions {
            slow: false,
            tables: Some(vec!["modcurve".to_string()]),
        },
    );
    let (pass, fail, _) = summarize(&checks);
    for c in checks.iter().filter(|c| c.status == CheckStatus::Fail) {
        eprintln!("FAILED: {} -- {}", c.name, c.detail);
    }
    assert_eq!(fail, 0);
    println!("[PASS] criterion 6: modular-curve checks ({pass} checks)");
}

// ---------------------------------------------------------------------------
// Criterion 7: randomized property suites (fixed seeds)
// ---------------------------------------------------------------------------

fn random_integral_elem(rng: &mut ChaCha8Rng, tag: FieldTag, norm_cap: i64) -> QuadElem {
    loop {
        let a = rng.gen_range(-40i64..=40);
        let b = rng.gen_range(-12i64..=12);
        let e = QuadElem::from_omega_coords(tag, &big(a), &big(b));
        if e.is_zero() {
            continue;
        }
        if e.norm() <= torsionlab::arith::rat(norm_cap) {
            return e;
        }
    }
}

fn random_curve(rng: &mut ChaCha8Rng, tag: FieldTag, norm_cap: i64) -> Curve<QuadElem> {
    loop {
        let alpha = random_integral_elem(rng, tag, norm_cap);
        let beta = random_integral_elem(rng, tag, norm_cap);
        if let Ok(c) = Curve::new(alpha, beta) {
            return c;
        }
    }
}

/// Brute search for an order-4 point: enumerate integral y with y^2
/// dividing the discriminant, then x dividing y^2, verify, and take orders.
/// None when the discriminant factorization is too rough to enumerate.
fn nagell_lutz_order4_oracle(curve: &Curve<QuadElem>, tag: FieldTag) -> Option<bool> {
    use torsionlab::ecurve::primes_above;
    let disc = curve.discriminant();
    let norm = disc.norm().to_integer();
    let fac = torsionlab::arith::factor(&norm.clone().max(big(1)))?;
    // prime elements of O_K dividing disc with their valuations
    let mut local: Vec<(QuadElem, u32)> = Vec::new();
    for (p, _) in &fac {
        let pu = num_traits::ToPrimitive::to_u64(p)?;
        for pi in primes_above(pu, tag).ok()? {
            let mut v = 0u32;
            let mut cur = disc.clone();
            loop {
                match cur.div(&pi) {
                    Some(q) if q.is_integral() => {
                        cur = q;
                        v += 1;
                    }
                    _ => break,
                }
                if v > 40 {
                    return None;
                }
            }
            if v > 0 && !local.iter().any(|(q, _)| q == &pi) {
                local.push((pi, v));
            }
        }
    }
    // candidate y: exponents up to floor(v/2)
    let mut ys: Vec<QuadElem> = vec![tag.zero()];
    let mut stack: Vec<(usize, QuadElem)> = vec![(0, tag.one())];
    while let Some((idx, acc)) = stack.pop() {
        if idx == local.len() {
            ys.push(acc);
            continue;
        }
        let (pi, v) = &local[idx];
        let mut cur = acc.clone();
        for e in 0..=(v / 2) {
            if e > 0 {
                cur = cur.mul(pi);
            }
            stack.push((idx + 1, cur.clone()));
        }
        if ys.len() + stack.len() > 2_000 {
            return None;
        }
    }
    // points: for each y, x runs over divisors of y^2 (and x = 0 for y = 0)
    let mut points: Vec<Point<QuadElem>> = Vec::new();
    for y in &ys {
        let y2 = y.square();
        let mut xs: Vec<QuadElem> = Vec::new();
        if y.is_zero() {
            xs.extend([tag.zero(), curve.alpha().neg(), curve.beta().neg()]);
        } else {
            // divisors of y^2 via the same prime basis
            let mut divisor_stack: Vec<(usize, QuadElem)> = vec![(0, tag.one())];
            while let Some((idx, acc)) = divisor_stack.pop() {
                if idx == local.len() {
                    xs.push(acc);
                    continue;
                }
                let (pi, _) = &local[idx];
                let mut cur = acc.clone();
                let mut e = 0;
                loop {
                    divisor_stack.push((idx + 1, cur.clone()));
                    // stop once pi^e no longer divides y^2
                    let next = cur.mul(pi);
                    match y2.div(&next) {
                        Some(q) if q.is_integral() => {
                            cur = next;
                            e += 1;
                        }
                        _ => break,
                    }
                    if e > 40 || divisor_stack.len() > 4_000 {
                        return None;
                    }
                }
            }
        }
        for x in xs {
            for cand in [x.clone(), x.neg()] {
                let p = Point::Affine(cand.clone(), y.clone());
                if curve.contains(&p) && !points.contains(&p) {
                    points.push(Point::Affine(cand.clone(), y.neg()));
                    points.push(p);
                }
            }
        }
        if points.iter().any(|p| curve.order_of_point(p, 4) == Some(4)) {
            return Some(true);
        }
    }
    let has4 = points
        .iter()
        .any(|p| curve.order_of_point(p, 4) == Some(4));
    Some(has4)
}

/// Theorem list for full-2-torsion curves: allowed n in Z/2 x Z/2n per field
/// of S (restricting the complete classification of torsion subgroups).
fn allowed_n(d: i64) -> &'static [u64] {
    match d {
        -2 => &[1, 2, 3, 4, 5],
        -7 => &[1, 2, 3, 4],
        -11 => &[1, 2, 3, 4, 5],
        -19 => &[1, 2, 3, 4, 5, 6],
        -43 | -67 | -163 => &[1, 2, 3, 4, 6],
        _ => &[1, 2, 3, 4, 5, 6],
    }
}

#[test]
fn criterion_7_property_suites() {
    let start = Instant::now();

    // (d) galois_square_units against brute force.
    for n in 2..=64u64 {
        let brute: Vec<u64> = (1..n)
            .filter(|a| num_integer::gcd(*a, n) == 1 && (a * a) % n == 1)
            .collect();
        assert_eq!(galois_square_units(n), brute, "units mismatch at n = {n}");
    }
    assert_eq!(galois_square_units(20), vec![1, 9, 11, 19]);

    // (a) criteria-vs-engine equivalence on 200 random curves per field,
    // and (e) membership in the classification lists.
    let per_field = 200usize;
    let mut factorization_failures = 0usize;
    for (i, d) in ALL_D.iter().enumerate() {
        let tag = tagged(*d);
        let mut rng = ChaCha8Rng::seed_from_u64(0x70 + i as u64);
        let curves: Vec<Curve<QuadElem>> = (0..per_field)
            .map(|_| random_curve(&mut rng, tag, 10_000))
            .collect();
        let results: Vec<(GroupShape, bool, bool, Option<bool>)> = curves
            .par_iter()
            .map(|c| {
                let g = torsion_subgroup(c, tag).expect("torsion computes");
                let (has4, _) = order_criteria(c, tag, 4).expect("criterion 4");
                let (has3, w3) = order_criteria(c, tag, 3).expect("criterion 3");
                if has3 {
                    // witnesses, when produced, must reproduce the curve
                    if let Some(CriterionWitness::Order3 { a, b, z }) = w3 {
                        let a3 = a.square().mul(&a);
                        let alpha = a3.mul(&a.add(&b.add(&b))).mul(&z.square());
                        assert_eq!(&alpha, c.alpha(), "order-3 witness mismatch");
                    }
                }
                let has8 = match order_criteria(c, tag, 8) {
                    Ok((v, _)) => Some(v),
                    Err(_) => None,
                };
                (g.shape, has4, has3, has8)
            })
            .collect();
        for (g, has4, has3, has8) in results {
            assert_eq!(has4, g.order() % 4 == 0 && g.n % 4 == 0, "n=4 criterion vs engine over D={d}");
            assert_eq!(has3, g.n % 3 == 0, "n=3 criterion vs engine over D={d}");
            match has8 {
                Some(v) => assert_eq!(v, g.n % 8 == 0, "n=8 criterion vs engine over D={d}"),
                None => factorization_failures += 1,
            }
            // (e) classification-list membership
            assert_eq!(g.m % 2, 0);
            assert!(g.n % g.m == 0 && g.n / 2 <= 6, "outside Z/2 x Z/2n, n <= 6: {g}");
            if tag.in_s() {
                assert!(
                    allowed_n(*d).contains(&(g.n / 2)),
                    "group {g} not allowed over D = {d}"
                );
            }
        }
    }
    if factorization_failures > 0 {
        eprintln!("note: {factorization_failures} n=8 factorizations exhausted (reported, not passed)");
    }

    // (a'), dual route: the halving engine against an independent brute
    // Nagell-Lutz search (integral points with y^2 | disc) on curves with
    // smooth-factorable discriminant, over the fields where 2 is unramified
    // so order-4 points are certainly integral.
    for (i, d) in [-7i64, -11, -19].iter().enumerate() {
        let tag = tagged(*d);
        let mut rng = ChaCha8Rng::seed_from_u64(0xA0 + i as u64);
        let mut tested = 0;
        while tested < 6 {
            let curve = random_curve(&mut rng, tag, 40);
            let Some(brute_has4) = nagell_lutz_order4_oracle(&curve, tag) else {
                continue;
            };
            let (crit4, _) = order_criteria(&curve, tag, 4).unwrap();
            assert_eq!(
                brute_has4, crit4,
                "Nagell-Lutz oracle vs criterion on ({}, {}) over D={d}",
                curve.alpha(),
                curve.beta()
            );
            tested += 1;
        }
    }

    // (b) Lemma 2.5 and the injection on scan rows of a small corpus.
    for (i, d) in ALL_D.iter().enumerate() {
        let tag = tagged(*d);
        let mut rng = ChaCha8Rng::seed_from_u64(0xB0 + i as u64);
        let curve = random_curve(&mut rng, tag, 2_000);
        let d_list: Vec<QuadElem> = (2..=10).map(|n| tag.from_i64(-n)).collect();
        let report = twistlab::scan(&curve, tag, &d_list).expect("scan");
        for row in &report.rows {
            assert!(row.error.is_none(), "scan error over D={d}: {:?}", row.error);
            assert!(
                row.violations.is_empty(),
                "scan violation over D={d} at d={}: {:?}",
                row.d,
                row.violations
            );
        }
    }

    // (c) the halving biconditional over K and over a sampled L.
    for (i, d) in [-2i64, -7, -19].iter().enumerate() {
        let tag = tagged(*d);
        let mut rng = ChaCha8Rng::seed_from_u64(0xC0 + i as u64);
        for _ in 0..40 {
            let curve = random_curve(&mut rng, tag, 400);
            // Random point: sample x until the right side is a square.
            let mut point = None;
            for _ in 0..60 {
                let x = random_integral_elem(&mut rng, tag, 2_000);
                if let Some(y) = curve.rhs(&x).sqrt_in_k() {
                    point = Some(Point::Affine(x, y));
                    break;
                }
            }
            let Some(p) = point else { continue };
            // forward: nonempty iff all three shifted coordinates square
            let Point::Affine(x, _) = &p else { unreachable!() };
            let all_squares = x.is_square()
                && x.add(curve.alpha()).is_square()
                && x.add(curve.beta()).is_square();
            let halves = curve.halve_point(&p);
            assert_eq!(
                !halves.is_empty(),
                all_squares,
                "halving biconditional fails over K = Q(sqrt({d}))"
            );
            for q in &halves {
                assert_eq!(curve.double_point(q), p);
            }
            // reverse: [2]Q is always halvable
            let doubled = curve.double_point(&p);
            if let Point::Affine(x2, _) = &doubled {
                assert!(
                    x2.is_square()
                        && x2.add(curve.alpha()).is_square()
                        && x2.add(curve.beta()).is_square(),
                    "doubled point not halvable over K = Q(sqrt({d}))"
                );
                assert!(!curve.halve_point(&doubled).is_empty());
            }
        }
        // over L: lift a curve and replay with tower arithmetic
        let tower = TowerTag::new(tag.from_i64(-5)).unwrap();
        for _ in 0..10 {
            let base = random_curve(&mut rng, tag, 200);
            let curve = Curve::new(
                tower.lift(base.alpha().clone()),
                tower.lift(base.beta().clone()),
            )
            .unwrap();
            let mut point = None;
            for _ in 0..60 {
                let u = random_integral_elem(&mut rng, tag, 500);
                let v = random_integral_elem(&mut rng, tag, 20);
                let x = tower.elem(u, v);
                if let Some(y) = curve.rhs(&x).sqrt_in_l() {
                    point = Some(Point::Affine(x, y));
                    break;
                }
            }
            let Some(p) = point else { continue };
            let Point::Affine(x, _) = &p else { unreachable!() };
            let all_squares = x.is_square()
                && x.add(curve.alpha()).is_square()
                && x.add(curve.beta()).is_square();
            let halves = curve.halve_point(&p);
            assert_eq!(!halves.is_empty(), all_squares, "halving over L fails");
            for q in &halves {
                assert_eq!(curve.double_point(q), p);
            }
        }
    }

    let secs = start.elapsed().as_secs_f64();
    println!("[PASS] criterion 7: property suites (seeded, {secs:.1}s)");
}

// ---------------------------------------------------------------------------
// Criterion 8: classification containment over dataset and corpus scans
// ---------------------------------------------------------------------------

#[test]
fn criterion_8_classification_containment() {
    let start = Instant::now();
    // The witness z = 15 sqrt(-7) must be reproduced on the table curve.
    let (tag7, e7) = curve_from(-7, "68121", "69696");
    let crit = z4z4_criterion(&e7);
    assert!(crit.holds);
    assert_eq!(crit.witness.unwrap(), parse_elem("15*w", tag7).unwrap());

    // Full dataset under the default d-scan.
    let ds = load_embedded();
    ds.entries.par_iter().for_each(|entry| {
        let tag = entry.tag();
        let curve = Curve::new(entry.alpha_elem(), entry.beta_elem()).unwrap();
        let d_list = twistlab::default_d_list(tag);
        let report = twistlab::scan(&curve, tag, &d_list).expect("scan");
        for row in &report.rows {
            assert!(
                row.violations.is_empty(),
                "{}: violation at d = {}: {:?}",
                entry.id,
                row.d,
                row.violations
            );
        }
    });

    // A seeded corpus per field under the default scan.
    for (i, d) in S_D.iter().enumerate() {
        let tag = tagged(*d);
        let mut rng = ChaCha8Rng::seed_from_u64(0x80 + i as u64);
        let curves: Vec<Curve<QuadElem>> =
            (0..2).map(|_| random_curve(&mut rng, tag, 2_000)).collect();
        let d_list = twistlab::default_d_list(tag);
        curves.par_iter().for_each(|curve| {
            let report = twistlab::scan(curve, tag, &d_list).expect("scan");
            for row in &report.rows {
                assert!(
                    row.violations.is_empty(),
                    "corpus violation over D={d} at d = {}: {:?}",
                    row.d,
                    row.violations
                );
            }
        });
    }

    // Twisting twice by a rational parameter normalizes back to the base
    // curve (model-level sanity for the scan's dedup-mod-squares rule).
    let (tag, e) = curve_from(-7, "64", "189");
    let d = tag.from_i64(21);
    let twice = twist_curve(&twist_curve(&e, &d).unwrap(), &d).unwrap();
    let (normalized, z) = twice.normalize_square_content();
    assert_eq!(z, Some(big(21)));
    assert_eq!(&normalized, &e);
    let _ = tag;

    let secs = start.elapsed().as_secs_f64();
    println!("[PASS] criterion 8: classification containment ({secs:.1}s)");
}
