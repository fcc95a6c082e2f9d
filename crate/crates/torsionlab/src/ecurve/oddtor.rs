//! The odd-torsion engine over K: root the division polynomial over a split
//! residue field, Hensel-lift, reconstruct the candidate in O_K by lattice
//! search, and verify exactly.

use super::{Curve, EcurveError, Point};
use crate::arith::{big, mod_inverse, rat_sqrt_ceil};
use crate::field::FieldElem;
use crate::poly::Poly;
use crate::qfield::{
    reconstruct_from_residue, splitting_type, FieldTag, QuadElem, SplitKind,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Odd part of the torsion: for each ell in {3, 5}, the rank of the
/// ell-torsion over K and generator witnesses (one per independent cyclic
/// factor).
#[derive(Debug, Clone)]
pub struct OddPart<F: FieldElem> {
    pub parts: Vec<(u64, u32, Vec<Point<F>>)>,
}

impl<F: FieldElem> OddPart<F> {
    pub fn trivial() -> OddPart<F> {
        OddPart { parts: Vec::new() }
    }

    pub fn rank_of(&self, ell: u64) -> u32 {
        self.parts
            .iter()
            .find(|(l, _, _)| *l == ell)
            .map(|(_, r, _)| *r)
            .unwrap_or(0)
    }

    pub fn order(&self) -> u64 {
        self.parts
            .iter()
            .map(|(l, r, _)| l.pow(*r))
            .product()
    }
}

/// Decimal-digit cap for the lifting precision (reported, never silently
/// wrong).
const PRECISION_DIGIT_CAP: u64 = 4096;

struct SplitEmbedding {
    k: u32,
    modulus: BigInt,
    sqrt_d: BigInt,
    d: BigInt,
}

impl SplitEmbedding {
    fn new(tag: FieldTag, p: u64) -> SplitEmbedding {
        let rep = splitting_type(p, tag);
        debug_assert_eq!(rep.kind, SplitKind::Split);
        SplitEmbedding {
            k: 1,
            modulus: big(p as i64),
            sqrt_d: big(rep.r.unwrap() as i64),
            d: big(tag.d()),
        }
    }

    /// Square the modulus (Newton step for sqrt(D) comes along).
    fn double(&mut self) {
        self.modulus = &self.modulus * &self.modulus;
        self.k *= 2;
        let two_r = &self.sqrt_d * 2;
        let inv = mod_inverse(&two_r, &self.modulus).expect("2r invertible at odd split p");
        let val = (&self.sqrt_d * &self.sqrt_d - &self.d).mod_floor(&self.modulus);
        self.sqrt_d = (&self.sqrt_d - val * inv).mod_floor(&self.modulus);
    }

    /// Image of an O_K element (denominators prime to p) in Z/p^k.
    fn embed(&self, x: &QuadElem) -> Option<BigInt> {
        let embed_rat = |q: &num_rational::BigRational| -> Option<BigInt> {
            let den = q.denom().mod_floor(&self.modulus);
            let inv = mod_inverse(&den, &self.modulus)?;
            Some((q.numer().mod_floor(&self.modulus) * inv).mod_floor(&self.modulus))
        };
        let a = embed_rat(x.a())?;
        let b = embed_rat(x.b())?;
        Some((a + b * &self.sqrt_d).mod_floor(&self.modulus))
    }
}

fn eval_mod(coeffs: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in coeffs.iter().rev() {
        acc = (acc * x + c).mod_floor(m);
    }
    acc
}

/// Height bound on coordinates (in the 1, omega basis) of any root of the
/// polynomial, from the Cauchy bound in the complex embedding.
fn root_height_bound(psi: &Poly<QuadElem>) -> BigInt {
    let lc = psi.lc().expect("nonzero").clone();
    let mut cauchy = big(1);
    for c in psi.coeffs().iter().take(psi.coeffs().len() - 1) {
        let ratio = c.div(&lc).expect("nonzero lc");
        // complex absolute value = sqrt(norm) for imaginary quadratic
        let bound = rat_sqrt_ceil(&ratio.norm());
        if bound > cauchy {
            cauchy = bound;
        }
    }
    let cb: BigInt = cauchy + 1;
    // |a|, |b| <= 2 * (Cauchy bound) in the 1, omega coordinates.
    cb * 2
}

/// Find all K-rational roots of psi (integral coefficients away from p) by
/// lifting its simple roots modulo a split prime.
fn k_roots_of(
    psi: &Poly<QuadElem>,
    tag: FieldTag,
    avoid: &[u64],
) -> Result<Vec<QuadElem>, EcurveError> {
    // Height bound and target precision: p^k > max(2 H^2, 10^12).
    let height = root_height_bound(psi);
    let target: BigInt = (&height * &height * 2i32).max(big(10).pow(12));
    if target.to_string().len() as u64 > PRECISION_DIGIT_CAP {
        return Err(EcurveError::PrecisionExhausted);
    }

    // Prime selection: smallest odd split p avoiding the given list, with
    // the reduced polynomial of full degree and squarefree.
    let mut chosen: Option<(u64, Vec<u64>)> = None;
    for rep in crate::qfield::split_primes(tag) {
        let p = rep.p;
        if avoid.contains(&p) || p == 2 {
            continue;
        }
        if p > 10_000 {
            break;
        }
        let emb = SplitEmbedding::new(tag, p);
        let coeffs: Option<Vec<BigInt>> = psi.coeffs().iter().map(|c| emb.embed(c)).collect();
        let Some(coeffs) = coeffs else { continue };
        let coeffs_u: Vec<u64> = coeffs
            .iter()
            .map(|c| c.mod_floor(&big(p as i64)).to_u64_digits().1.first().copied().unwrap_or(0))
            .collect();
        let ctx = crate::ff::FFElem::prime_field(p, 0);
        let fpoly = Poly::new(
            ctx,
            coeffs_u
                .iter()
                .map(|&c| crate::ff::FFElem::prime_field(p, c))
                .collect(),
        );
        if fpoly.degree() != psi.degree() {
            continue;
        }
        if !fpoly.is_squarefree() {
            continue;
        }
        let roots: Vec<u64> = (0..p)
            .filter(|&x| fpoly.eval(&crate::ff::FFElem::prime_field(p, x)).is_zero())
            .collect();
        chosen = Some((p, roots));
        break;
    }
    let Some((p, roots)) = chosen else {
        return Err(EcurveError::NoGoodPrimeFound);
    };
    if roots.is_empty() {
        return Ok(Vec::new());
    }

    // Lift each simple root, then reconstruct and verify.
    let mut out: Vec<QuadElem> = Vec::new();
    let deriv = psi.derivative();
    for r0 in roots {
        let mut emb = SplitEmbedding::new(tag, p);
        let mut r = big(r0 as i64);
        while emb.modulus < target {
            emb.double();
            let coeffs: Vec<BigInt> = psi
                .coeffs()
                .iter()
                .map(|c| emb.embed(c).expect("denominators prime to p"))
                .collect();
            let dcoeffs: Vec<BigInt> = deriv
                .coeffs()
                .iter()
                .map(|c| emb.embed(c).expect("denominators prime to p"))
                .collect();
            let fr = eval_mod(&coeffs, &r, &emb.modulus);
            let dfr = eval_mod(&dcoeffs, &r, &emb.modulus);
            let inv = mod_inverse(&dfr, &emb.modulus)
                .expect("simple root keeps derivative invertible");
            r = (&r - fr * inv).mod_floor(&emb.modulus);
        }
        if let Some(cand) = reconstruct_from_residue(&r, p, emb.k, tag, &height)? {
            if psi.eval(&cand).is_zero() && !out.contains(&cand) {
                out.push(cand);
            }
        }
    }
    Ok(out)
}

/// Odd torsion of E over K for ell in {3, 5} dividing the reduction bound.
pub fn odd_torsion(
    curve: &Curve<QuadElem>,
    tag: FieldTag,
    bound: u64,
) -> Result<OddPart<QuadElem>, EcurveError> {
    if !curve.alpha().is_integral() || !curve.beta().is_integral() {
        return Err(EcurveError::NonIntegralInput);
    }
    let mut parts: Vec<(u64, u32, Vec<Point<QuadElem>>)> = Vec::new();
    for ell in [3u64, 5] {
        if bound % ell != 0 {
            continue;
        }
        let psi = curve.division_poly_raw(ell as u32);
        // Avoid the characteristic ell and bad-reduction primes implicitly:
        // a root of the discriminant makes psi non-squarefree mod p, which
        // the prime selection already rejects.
        let xs = k_roots_of(&psi, tag, &[ell])?;
        let mut points: Vec<Point<QuadElem>> = Vec::new();
        for x in xs {
            let rhs = curve.rhs(&x);
            if let Some(y) = rhs.sqrt() {
                let pt = Point::Affine(x, y);
                debug_assert!(curve.contains(&pt));
                if curve.mul_point(ell, &pt).is_infinity() && !pt.is_infinity() {
                    points.push(pt);
                }
            }
        }
        // Group the points into cyclic subgroups via their x-coordinates.
        let mut subgroup_reps: Vec<Point<QuadElem>> = Vec::new();
        let mut seen_x: Vec<QuadElem> = Vec::new();
        for pt in &points {
            let x = pt.x().unwrap();
            if seen_x.contains(x) {
                continue;
            }
            // record all x-coordinates of this subgroup
            let mut q = pt.clone();
            for _ in 0..ell {
                if let Point::Affine(xq, _) = &q {
                    if !seen_x.contains(xq) {
                        seen_x.push(xq.clone());
                    }
                }
                q = curve.add_points(&q, pt);
            }
            subgroup_reps.push(pt.clone());
        }
        let rank: usize = match subgroup_reps.len() {
            0 => 0,
            1 => 1,
            n if n as u64 == ell + 1 => 2,
            n => {
                return Err(EcurveError::ConsistencyFailure(format!(
                    "{n} cyclic {ell}-subgroups found; expected 0, 1 or {}",
                    ell + 1
                )))
            }
        };
        if rank > 0 {
            let gens = subgroup_reps.into_iter().take(rank as usize).collect();
            parts.push((ell, rank as u32, gens));
        }
    }
    Ok(OddPart { parts })
}

/// Integral rescale: smallest s with s^2 alpha, s^2 beta integral, mapping
/// (x, y) -> (s^2 x, s^3 y) onto the integral model.
pub fn integral_model(curve: &Curve<QuadElem>) -> (Curve<QuadElem>, BigInt) {
    let mut s = big(1);
    for q in [
        curve.alpha().a(),
        curve.alpha().b(),
        curve.beta().a(),
        curve.beta().b(),
    ] {
        s = s.lcm(q.denom());
    }
    if curve.alpha().is_integral() && curve.beta().is_integral() {
        return (curve.clone(), big(1));
    }
    let tag = curve.alpha().tag();
    let s_elem = QuadElem::from_rational(tag, num_rational::BigRational::from_integer(s.clone()));
    let s2 = s_elem.square();
    let scaled = Curve::new(curve.alpha().mul(&s2), curve.beta().mul(&s2))
        .expect("scaling preserves smoothness");
    (scaled, s)
}

/// Map a point on the integral model back to the original curve.
pub fn unscale_point(pt: &Point<QuadElem>, s: &BigInt, tag: FieldTag) -> Point<QuadElem> {
    if s.is_one() {
        return pt.clone();
    }
    match pt {
        Point::Infinity => Point::Infinity,
        Point::Affine(x, y) => {
            let s_elem = QuadElem::from_rational(
                tag,
                num_rational::BigRational::from_integer(s.clone()),
            );
            let s2 = s_elem.square();
            let s3 = s2.mul(&s_elem);
            Point::Affine(
                x.div(&s2).expect("s nonzero"),
                y.div(&s3).expect("s nonzero"),
            )
        }
    }
}
