//! Reduction of curves at primes of O_K, naive point counting over the
//! residue fields, and the injectivity-based torsion bound.

use super::{Curve, EcurveError, Point};
use crate::arith::{valuation_u64, Primes};
use crate::ff::FFElem;
use crate::field::FieldElem;
use crate::qfield::{reduce_mod, splitting_type, FieldTag, PrimeIdealRep, QuadElem, SplitKind};
use std::collections::HashSet;

/// A curve over a residue field, remembering the prime it came from.
#[derive(Debug, Clone)]
pub struct FiniteCurve {
    pub curve: Curve<FFElem>,
    pub prime: PrimeIdealRep,
}

/// Reduce E at P. None signals bad reduction (vanishing discriminant);
/// errors signal non-integrality at P.
pub fn reduce_curve(
    curve: &Curve<QuadElem>,
    prime: &PrimeIdealRep,
) -> Result<Option<FiniteCurve>, EcurveError> {
    if curve.alpha().denom_valuation(prime.p) > 0 || curve.beta().denom_valuation(prime.p) > 0 {
        return Err(EcurveError::NonIntegralAtP);
    }
    let a = reduce_mod(curve.alpha(), prime).map_err(|_| EcurveError::NonIntegralAtP)?;
    let b = reduce_mod(curve.beta(), prime).map_err(|_| EcurveError::NonIntegralAtP)?;
    if a.is_zero() || b.is_zero() || a == b || prime.p == 2 {
        return Ok(None);
    }
    Ok(Some(FiniteCurve {
        curve: Curve::new(a, b).expect("checked smooth"),
        prime: *prime,
    }))
}

/// |E(F_q)| including the point at infinity, by enumeration of x with a
/// precomputed square table.
pub fn count_points(fc: &FiniteCurve) -> u64 {
    let sample = fc.curve.alpha();
    let elems = sample.enumerate_field();
    let mut squares: HashSet<(u64, u64)> = HashSet::with_capacity(elems.len());
    for e in &elems {
        squares.insert(e.mul(e).coords());
    }
    let mut count = 1u64; // infinity
    for x in &elems {
        let rhs = fc.curve.rhs(x);
        if rhs.is_zero() {
            count += 1;
        } else if squares.contains(&rhs.coords()) {
            count += 2;
        }
    }
    count
}

/// Metadata about the primes used by a torsion bound.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub bound: u64,
    pub primes: Vec<(u64, SplitKind, u64)>, // (p, kind, point count)
}

const PRIME_SCAN_LIMIT: u64 = 10_000;

/// Select the smallest odd, unramified, good-reduction primes for E, split
/// preferred over inert, deterministically.
pub fn select_bound_primes(
    curve: &Curve<QuadElem>,
    tag: FieldTag,
    want: usize,
) -> Result<Vec<FiniteCurve>, EcurveError> {
    let mut split_found: Vec<FiniteCurve> = Vec::new();
    let mut inert_found: Vec<FiniteCurve> = Vec::new();
    for p in Primes::new() {
        if p > PRIME_SCAN_LIMIT {
            break;
        }
        if p == 2 {
            continue;
        }
        if split_found.len() >= want {
            break;
        }
        let rep = splitting_type(p, tag);
        if rep.kind == SplitKind::Ramified {
            continue;
        }
        // Inert residue fields cost O(p^2); only consider small ones.
        if rep.kind == SplitKind::Inert && p > 97 {
            continue;
        }
        match reduce_curve(curve, &rep) {
            Ok(Some(fc)) => match rep.kind {
                SplitKind::Split => split_found.push(fc),
                SplitKind::Inert => {
                    if inert_found.len() < want {
                        inert_found.push(fc)
                    }
                }
                SplitKind::Ramified => {}
            },
            Ok(None) => {}
            Err(_) => {}
        }
    }
    let mut out = split_found;
    out.extend(inert_found);
    out.truncate(want);
    if out.is_empty() {
        return Err(EcurveError::NoGoodPrimeFound);
    }
    Ok(out)
}

/// Injectivity bound: for each prime ell, the ell-adic valuation of the
/// bound is the minimum of v_ell(|E(k_P)|) over chosen P of residue
/// characteristic != ell. E(K)_tor always divides the result.
pub fn torsion_bound(curve: &Curve<QuadElem>, tag: FieldTag) -> Result<BoundReport, EcurveError> {
    let reductions = select_bound_primes(curve, tag, 3)?;
    let counts: Vec<(u64, SplitKind, u64)> = reductions
        .iter()
        .map(|fc| (fc.prime.p, fc.prime.kind, count_points(fc)))
        .collect();
    let bound = combine_counts(&counts);
    Ok(BoundReport {
        bound,
        primes: counts,
    })
}

/// Combine per-prime point counts into the min-valuation bound.
pub fn combine_counts(counts: &[(u64, SplitKind, u64)]) -> u64 {
    let mut primes_seen: Vec<u64> = Vec::new();
    for (_, _, n) in counts {
        let mut n = *n;
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                if !primes_seen.contains(&d) {
                    primes_seen.push(d);
                }
                while n % d == 0 {
                    n /= d;
                }
            }
            d += 1;
        }
        if n > 1 && !primes_seen.contains(&n) {
            primes_seen.push(n);
        }
    }
    primes_seen.sort_unstable();
    let mut bound = 1u64;
    for ell in primes_seen {
        let vals: Vec<u32> = counts
            .iter()
            .filter(|(p, _, _)| *p != ell)
            .map(|(_, _, n)| valuation_u64(*n, ell))
            .collect();
        if vals.is_empty() {
            continue;
        }
        let v = vals.into_iter().min().unwrap();
        bound *= ell.pow(v);
    }
    bound
}

/// Enumerate all points of a finite curve (small fields only).
#[allow(dead_code)]
pub fn enumerate_points(fc: &FiniteCurve) -> Vec<Point<FFElem>> {
    let sample = fc.curve.alpha();
    let elems = sample.enumerate_field();
    let mut out = vec![Point::Infinity];
    for x in &elems {
        let rhs = fc.curve.rhs(x);
        for y in &elems {
            if y.mul(y) == rhs {
                out.push(Point::Affine(*x, *y));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(d: i64) -> FieldTag {
        FieldTag::new(d).unwrap()
    }

    fn curve(d: i64, a: i64, b: i64) -> Curve<QuadElem> {
        Curve::new(k(d).from_i64(a), k(d).from_i64(b)).unwrap()
    }

    #[test]
    fn reduction_good_and_bad() {
        let e = curve(-2, 1, 4);
        // alpha - beta = -3: bad at 3
        let p3 = splitting_type(3, k(-2));
        assert!(reduce_curve(&e, &p3).unwrap().is_none());
        let p7 = splitting_type(7, k(-2));
        assert!(reduce_curve(&e, &p7).unwrap().is_some());
        // E(64,189) mod 11: disc factor check, 11 inert in Q(sqrt(-7))? -7 = 4 mod 11, QR -> split
        let e2 = curve(-7, 64, 189);
        let p11 = splitting_type(11, k(-7));
        assert_eq!(p11.kind, SplitKind::Split);
        // 64*189*(64-189) != 0 mod 11: 64=9, 189=2, diff=-125=7 mod 11: good
        assert!(reduce_curve(&e2, &p11).unwrap().is_some());
        // non-integral at p
        let t = k(-7);
        let frac = Curve::new(
            t.elem(crate::arith::ratio(1, 11), crate::arith::rat(0)),
            t.from_i64(2),
        )
        .unwrap();
        assert!(matches!(
            reduce_curve(&frac, &p11),
            Err(EcurveError::NonIntegralAtP)
        ));
    }

    #[test]
    fn counting_two_ways() {
        // y^2 = x^3 - x over F_5 has 8 points: count by chi-sum equals
        // enumeration; the curve is E(-1, 1) in our model.
        let rep = splitting_type(5, k(-19)); // 5 splits in Q(sqrt(-19))
        assert_eq!(rep.kind, SplitKind::Split);
        let e = curve(-19, -1, 1);
        let fc = reduce_curve(&e, &rep).unwrap().unwrap();
        assert_eq!(count_points(&fc), 8);
        assert_eq!(enumerate_points(&fc).len(), 8);
        // y^2 = x(x+1)(x+4) over F_7: two methods agree
        let rep7 = splitting_type(7, k(-19));
        let e14 = curve(-19, 1, 4);
        if let Some(fc7) = reduce_curve(&e14, &rep7).unwrap() {
            assert_eq!(count_points(&fc7) as usize, enumerate_points(&fc7).len());
        }
        // full 2-torsion reduces faithfully: count = 0 mod 4
        assert_eq!(count_points(&fc) % 4, 0);
    }

    #[test]
    fn inert_field_counting() {
        // E(1, 2) over F_{p^2} for inert p: |E| = 0 mod 4 still.
        let rep = splitting_type(5, k(-2));
        assert_eq!(rep.kind, SplitKind::Inert);
        let e = curve(-2, 1, 2);
        let fc = reduce_curve(&e, &rep).unwrap().unwrap();
        let n = count_points(&fc);
        assert_eq!(n as usize, enumerate_points(&fc).len());
        assert_eq!(n % 4, 0);
    }

    #[test]
    fn bound_is_multiple_of_torsion() {
        // E(1,4) over Q(sqrt(-2)) has torsion Z/2 x Z/4 (order 8): the bound
        // must be divisible by 8.
        let e = curve(-2, 1, 4);
        let report = torsion_bound(&e, k(-2)).unwrap();
        assert_eq!(report.bound % 8, 0, "bound {} primes {:?}", report.bound, report.primes);
        // E(64,189): Z/2 x Z/6 rational torsion, 12 | bound.
        let e2 = curve(-7, 64, 189);
        let report = torsion_bound(&e2, k(-7)).unwrap();
        assert_eq!(report.bound % 12, 0);
    }

    #[test]
    fn combine_counts_logic() {
        // ell parts exclude own characteristic.
        let counts = vec![
            (3u64, SplitKind::Split, 20u64),
            (5, SplitKind::Split, 40),
            (7, SplitKind::Split, 20),
        ];
        // v2 = min(2,3,2) = 2; v5: over p != 5: v5(20)=1, v5(20)=1 -> 1
        assert_eq!(combine_counts(&counts), 20);
    }
}
