//! Elliptic-curve arithmetic for the full-2-torsion model
//! E(alpha, beta): y^2 = x(x + alpha)(x + beta), generic over the exact
//! fields of the tower, plus the torsion-subgroup engines.

mod criteria;
mod oddtor;
mod reduction;
mod torsion;
mod twopart;

pub use criteria::{order_criteria, primes_above, CriterionWitness};
pub use oddtor::{integral_model, odd_torsion, unscale_point, OddPart};
pub use reduction::{count_points, reduce_curve, torsion_bound, BoundReport, FiniteCurve};
pub use torsion::{
    check_weil_constraint, torsion_subgroup, torsion_subgroup_ext, verify_stable_subgroup,
    ExtResult, StableReport,
};
pub use twopart::{two_primary_torsion, TwoPart};

use crate::field::FieldElem;
use crate::qfield::QFieldError;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum EcurveError {
    SingularCurve,
    PointNotOnCurve,
    NonIntegralInput,
    NonIntegralAtP,
    NoGoodPrimeFound,
    PrecisionExhausted,
    FactorizationExhausted,
    SquareTwistParameter,
    ConsistencyFailure(String),
    Field(QFieldError),
}

impl fmt::Display for EcurveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EcurveError::SingularCurve => write!(f, "singular curve"),
            EcurveError::PointNotOnCurve => write!(f, "point does not lie on the curve"),
            EcurveError::NonIntegralInput => write!(f, "coefficients are not integral"),
            EcurveError::NonIntegralAtP => write!(f, "coefficients are not integral at P"),
            EcurveError::NoGoodPrimeFound => write!(f, "no good reduction prime below the scan bound"),
            EcurveError::PrecisionExhausted => write!(f, "lifting precision cap exhausted"),
            EcurveError::FactorizationExhausted => write!(f, "factorization exhausted"),
            EcurveError::SquareTwistParameter => write!(f, "twist parameter is a square"),
            EcurveError::ConsistencyFailure(msg) => write!(f, "consistency failure: {msg}"),
            EcurveError::Field(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for EcurveError {}

impl From<QFieldError> for EcurveError {
    fn from(e: QFieldError) -> Self {
        EcurveError::Field(e)
    }
}

/// A point on E, exact coordinates.
#[derive(Debug, Clone, PartialEq)]
pub enum Point<F: FieldElem> {
    Infinity,
    Affine(F, F),
}

impl<F: FieldElem> Point<F> {
    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn x(&self) -> Option<&F> {
        match self {
            Point::Infinity => None,
            Point::Affine(x, _) => Some(x),
        }
    }

    pub fn canon_string(&self) -> String {
        match self {
            Point::Infinity => "inf".to_string(),
            Point::Affine(x, y) => format!("({}, {})", x.canon_string(), y.canon_string()),
        }
    }
}

/// The model y^2 = x(x + alpha)(x + beta) = x^3 + a2 x^2 + a4 x.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve<F: FieldElem> {
    alpha: F,
    beta: F,
    a2: F,
    a4: F,
}

impl<F: FieldElem> Curve<F> {
    /// Validated smooth curve: alpha, beta and alpha - beta all nonzero.
    pub fn new(alpha: F, beta: F) -> Result<Curve<F>, EcurveError> {
        if alpha.is_zero() || beta.is_zero() || alpha == beta {
            return Err(EcurveError::SingularCurve);
        }
        let a2 = alpha.add(&beta);
        let a4 = alpha.mul(&beta);
        Ok(Curve {
            alpha,
            beta,
            a2,
            a4,
        })
    }

    pub fn alpha(&self) -> &F {
        &self.alpha
    }

    pub fn beta(&self) -> &F {
        &self.beta
    }

    pub fn a2(&self) -> &F {
        &self.a2
    }

    pub fn a4(&self) -> &F {
        &self.a4
    }

    /// 16 alpha^2 beta^2 (alpha - beta)^2
    pub fn discriminant(&self) -> F {
        let d = self.alpha.sub(&self.beta);
        let prod = self.alpha.mul(&self.beta).mul(&d);
        prod.square().mul(&self.alpha.from_i64_like(16))
    }

    /// Right-hand side x(x + alpha)(x + beta).
    pub fn rhs(&self, x: &F) -> F {
        x.mul(&x.add(&self.alpha)).mul(&x.add(&self.beta))
    }

    pub fn contains(&self, p: &Point<F>) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine(x, y) => y.square() == self.rhs(x),
        }
    }

    pub fn neg_point(&self, p: &Point<F>) -> Point<F> {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(x.clone(), y.neg()),
        }
    }

    /// Chord-tangent addition.
    pub fn add_points(&self, p: &Point<F>, q: &Point<F>) -> Point<F> {
        match (p, q) {
            (Point::Infinity, _) => q.clone(),
            (_, Point::Infinity) => p.clone(),
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => {
                let lambda = if x1 == x2 {
                    if y1.add(y2).is_zero() {
                        return Point::Infinity;
                    }
                    // tangent: (3x^2 + 2 a2 x + a4) / (2y)
                    let num = x1
                        .square()
                        .mul(&x1.from_i64_like(3))
                        .add(&self.a2.mul(x1).mul(&x1.from_i64_like(2)))
                        .add(&self.a4);
                    let den = y1.add(y1);
                    num.div(&den).expect("y != 0 on non-2-torsion tangent")
                } else {
                    y2.sub(y1).div(&x2.sub(x1)).expect("x1 != x2")
                };
                let x3 = lambda.square().sub(&self.a2).sub(x1).sub(x2);
                let y3 = lambda.mul(&x1.sub(&x3)).sub(y1);
                Point::Affine(x3, y3)
            }
        }
    }

    /// Addition with membership validation on both operands.
    pub fn add_points_checked(
        &self,
        p: &Point<F>,
        q: &Point<F>,
    ) -> Result<Point<F>, EcurveError> {
        if !self.contains(p) || !self.contains(q) {
            return Err(EcurveError::PointNotOnCurve);
        }
        Ok(self.add_points(p, q))
    }

    pub fn double_point(&self, p: &Point<F>) -> Point<F> {
        self.add_points(p, p)
    }

    pub fn mul_point(&self, n: u64, p: &Point<F>) -> Point<F> {
        let mut acc = Point::Infinity;
        let mut base = p.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add_points(&acc, &base);
            }
            base = self.double_point(&base);
            n >>= 1;
        }
        acc
    }

    /// Least n <= cap with [n]P = infinity.
    pub fn order_of_point(&self, p: &Point<F>, cap: u64) -> Option<u64> {
        if p.is_infinity() {
            return Some(1).filter(|_| cap >= 1);
        }
        let mut acc = p.clone();
        for n in 1..=cap {
            if acc.is_infinity() {
                return Some(n);
            }
            acc = self.add_points(&acc, p);
        }
        None
    }

    /// The four points of order dividing 2: infinity, (0,0), (-alpha,0), (-beta,0).
    pub fn two_torsion(&self) -> Vec<Point<F>> {
        let zero = self.alpha.zero_like();
        vec![
            Point::Infinity,
            Point::Affine(zero.clone(), zero.clone()),
            Point::Affine(self.alpha.neg(), zero.clone()),
            Point::Affine(self.beta.neg(), zero),
        ]
    }

    /// All Q with [2]Q = P, by the three-squares halving criterion: the
    /// shifted coordinates x, x+alpha, x+beta must all be squares; the
    /// candidate x-coordinates are x + e1*r0r1 + e2*r0r2 + e3*r1r2 over the
    /// sign patterns with e1*e2*e3 = 1. Every returned point is verified.
    pub fn halve_point(&self, p: &Point<F>) -> Vec<Point<F>> {
        let Point::Affine(x, _y) = p else {
            return Vec::new();
        };
        let s0 = x.sqrt();
        let s1 = x.add(&self.alpha).sqrt();
        let s2 = x.add(&self.beta).sqrt();
        let (Some(r0), Some(r1), Some(r2)) = (s0, s1, s2) else {
            return Vec::new();
        };
        let mut out: Vec<Point<F>> = Vec::new();
        let prods = [r0.mul(&r1), r0.mul(&r2), r1.mul(&r2)];
        for signs in [[1i64, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]] {
            let mut xq = x.clone();
            for (prod, s) in prods.iter().zip(signs) {
                let term = if s == 1 { prod.clone() } else { prod.neg() };
                xq = xq.add(&term);
            }
            let rhs = self.rhs(&xq);
            if let Some(yq) = rhs.sqrt() {
                for cand in [Point::Affine(xq.clone(), yq.clone()), Point::Affine(xq.clone(), yq.neg())] {
                    if self.double_point(&cand) == *p && !out.contains(&cand) {
                        out.push(cand);
                    }
                }
            }
        }
        out.sort_by_key(|q| q.canon_string());
        out
    }

    /// The division polynomial psi_ell for ell in {3, 5}, monic-normalized.
    /// For y^2 = f(x) = x^3 + A x^2 + B x:
    ///   psi_3 = 3x^4 + 4A x^3 + 6B x^2 - B^2
    ///   psi_5 = 32 f^2 g4 - psi_3^3 with g4 = f'(4f(3x + A) - f'^2) - 8 f^2
    pub fn division_poly(&self, ell: u32) -> crate::poly::Poly<F> {
        self.division_poly_raw(ell).monic()
    }

    /// Same polynomial with its natural integral leading coefficient (3 or 5).
    pub fn division_poly_raw(&self, ell: u32) -> crate::poly::Poly<F> {
        use crate::poly::Poly;
        let ctx = self.alpha.one_like();
        let a = &self.a2;
        let b = &self.a4;
        let psi3 = Poly::new(
            ctx.clone(),
            vec![
                b.square().neg(),
                ctx.zero_like(),
                b.mul(&ctx.from_i64_like(6)),
                a.mul(&ctx.from_i64_like(4)),
                ctx.from_i64_like(3),
            ],
        );
        match ell {
            3 => psi3,
            5 => {
                let f = Poly::new(
                    ctx.clone(),
                    vec![ctx.zero_like(), b.clone(), a.clone(), ctx.one_like()],
                );
                let fp = f.derivative();
                // g4 = f' * (4 f (3x + A) - f'^2) - 8 f^2
                let three_x_plus_a = Poly::new(ctx.clone(), vec![a.clone(), ctx.from_i64_like(3)]);
                let inner = f
                    .mul(&three_x_plus_a)
                    .scale(&ctx.from_i64_like(4))
                    .sub(&fp.mul(&fp));
                let g4 = fp
                    .mul(&inner)
                    .sub(&f.mul(&f).scale(&ctx.from_i64_like(8)));
                f.mul(&f)
                    .mul(&g4)
                    .scale(&ctx.from_i64_like(32))
                    .sub(&psi3.mul(&psi3).mul(&psi3))
            }
            _ => panic!("division_poly supports ell in {{3, 5}} only"),
        }
    }
}

impl Curve<crate::qfield::QuadElem> {
    /// Divide out the largest rational square z^2 dividing both integral
    /// coefficients (the isomorphism x -> x/z^2, y -> y/z^3); returns the
    /// witness z when nontrivial. Non-integral models are left untouched.
    pub fn normalize_square_content(
        &self,
    ) -> (Curve<crate::qfield::QuadElem>, Option<num_bigint::BigInt>) {
        use num_bigint::BigInt;
        use num_integer::Integer as _;
        use num_traits::{One, Signed};
        let coords = |x: &crate::qfield::QuadElem| x.omega_coords();
        let (Some((a1, b1)), Some((a2, b2))) = (coords(&self.alpha), coords(&self.beta)) else {
            return (self.clone(), None);
        };
        let mut g: BigInt = a1.abs().gcd(&b1.abs());
        g = g.gcd(&a2.abs()).gcd(&b2.abs());
        let Some((_, f)) = crate::arith::squarefree_decompose(&g) else {
            return (self.clone(), None);
        };
        if f.is_one() {
            return (self.clone(), None);
        }
        let fe = crate::qfield::QuadElem::from_rational(
            self.alpha.tag(),
            num_rational::BigRational::from_integer(f.clone()),
        );
        let f2 = fe.square();
        let alpha = self.alpha.div(&f2).expect("nonzero");
        let beta = self.beta.div(&f2).expect("nonzero");
        (
            Curve::new(alpha, beta).expect("normalization preserves smoothness"),
            Some(f),
        )
    }
}

/// Quadratic twist E^d: y^2 = x(x + d alpha)(x + d beta). Errors if d is a
/// square in the coefficient field.
pub fn twist_curve<F: FieldElem>(curve: &Curve<F>, d: &F) -> Result<Curve<F>, EcurveError> {
    if d.sqrt().is_some() {
        return Err(EcurveError::SquareTwistParameter);
    }
    Curve::new(curve.alpha.mul(d), curve.beta.mul(d))
}

/// {a in (Z/n)^x : a^2 = 1 mod n}: the possible eigenvalues of an order-<=2
/// Galois action on a cyclic factor.
pub fn galois_square_units(n: u64) -> Vec<u64> {
    assert!(n >= 2);
    (1..n)
        .filter(|a| num_integer::gcd(*a, n) == 1 && (a * a) % n == 1)
        .collect()
}

// ---------------------------------------------------------------------------
// Group shapes and torsion groups
// ---------------------------------------------------------------------------

/// Invariant-factor pair (m, n) with m | n: the group Z/m + Z/n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupShape {
    pub m: u64,
    pub n: u64,
}

impl GroupShape {
    pub fn new(m: u64, n: u64) -> GroupShape {
        assert!(m >= 1 && n >= 1 && n % m == 0, "need m | n, got ({m}, {n})");
        GroupShape { m, n }
    }

    pub fn trivial() -> GroupShape {
        GroupShape { m: 1, n: 1 }
    }

    pub fn cyclic(n: u64) -> GroupShape {
        GroupShape { m: 1, n }
    }

    pub fn order(&self) -> u64 {
        self.m * self.n
    }

    pub fn exponent(&self) -> u64 {
        self.n
    }

    /// Combine two shapes with coprime orders.
    pub fn merge_coprime(&self, other: &GroupShape) -> GroupShape {
        debug_assert_eq!(num_integer::gcd(self.order(), other.order()), 1);
        GroupShape::new(self.m * other.m, self.n * other.n)
    }
}

impl fmt::Display for GroupShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 1 && self.n == 1 {
            write!(f, "trivial")
        } else if self.m == 1 {
            write!(f, "Z/{}", self.n)
        } else {
            write!(f, "Z/{} x Z/{}", self.m, self.n)
        }
    }
}

/// A computed torsion subgroup: shape plus generator witnesses of orders m
/// and n (the order-m generator is omitted when m = 1).
#[derive(Debug, Clone)]
pub struct TorsionGroup<F: FieldElem> {
    pub shape: GroupShape,
    pub gens: Vec<Point<F>>,
}

impl<F: FieldElem> TorsionGroup<F> {
    pub fn trivial() -> TorsionGroup<F> {
        TorsionGroup {
            shape: GroupShape::trivial(),
            gens: Vec::new(),
        }
    }

    pub fn order(&self) -> u64 {
        self.shape.order()
    }

    /// JSON rendering {"m":..,"n":..,"generators":[..]}.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "m": self.shape.m,
            "n": self.shape.n,
            "generators": self.gens.iter().map(|g| g.canon_string()).collect::<Vec<_>>(),
        })
    }
}
