//! Univariate polynomials over an exact field, with the handful of symbolic
//! tools the project needs: gcd and squarefree parts, Sturm chains for real
//! root counting, resultants, and a small bivariate layer over Q used by the
//! plane-curve checks.

use crate::arith::rat_sqrt_exact;
use crate::field::FieldElem;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

impl FieldElem for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn from_i64_like(&self, n: i64) -> Self {
        BigRational::from_integer(n.into())
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sqrt(&self) -> Option<Self> {
        rat_sqrt_exact(self)
    }
    fn canon_string(&self) -> String {
        format!("{self}")
    }
}

/// Dense univariate polynomial. `ctx` is any element of the coefficient
/// field (used to mint zeros and ones); coefficients never end in zero.
#[derive(Debug, Clone)]
pub struct Poly<T: FieldElem> {
    ctx: T,
    coeffs: Vec<T>,
}

impl<T: FieldElem> PartialEq for Poly<T> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<T: FieldElem> Poly<T> {
    pub fn new(ctx: T, mut coeffs: Vec<T>) -> Poly<T> {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        Poly { ctx, coeffs }
    }

    pub fn zero(ctx: T) -> Poly<T> {
        Poly {
            ctx,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: T) -> Poly<T> {
        Poly::new(c.clone(), vec![c])
    }

    pub fn from_coeffs_i64(ctx: &T, coeffs: &[i64]) -> Poly<T> {
        Poly::new(
            ctx.clone(),
            coeffs.iter().map(|&c| ctx.from_i64_like(c)).collect(),
        )
    }

    /// c * x^k
    pub fn monomial(ctx: &T, c: T, k: usize) -> Poly<T> {
        let mut coeffs = vec![ctx.zero_like(); k];
        coeffs.push(c);
        Poly::new(ctx.clone(), coeffs)
    }

    pub fn x(ctx: &T) -> Poly<T> {
        Poly::monomial(ctx, ctx.one_like(), 1)
    }

    pub fn ctx(&self) -> &T {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.ctx.zero_like())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn lc(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i).add(&other.coeff(i)));
        }
        Poly::new(self.ctx.clone(), out)
    }

    pub fn sub(&self, other: &Poly<T>) -> Poly<T> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly<T> {
        Poly::new(
            self.ctx.clone(),
            self.coeffs.iter().map(|c| c.neg()).collect(),
        )
    }

    pub fn mul(&self, other: &Poly<T>) -> Poly<T> {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.ctx.clone());
        }
        let mut out = vec![self.ctx.zero_like(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::new(self.ctx.clone(), out)
    }

    pub fn scale(&self, c: &T) -> Poly<T> {
        Poly::new(
            self.ctx.clone(),
            self.coeffs.iter().map(|a| a.mul(c)).collect(),
        )
    }

    pub fn eval(&self, x: &T) -> T {
        let mut acc = self.ctx.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> Poly<T> {
        if self.coeffs.len() <= 1 {
            return Poly::zero(self.ctx.clone());
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&self.ctx.from_i64_like(i as i64)))
            .collect();
        Poly::new(self.ctx.clone(), out)
    }

    /// Euclidean division; the divisor's leading coefficient must be
    /// invertible (always true over a field for nonzero divisors).
    pub fn divrem(&self, divisor: &Poly<T>) -> (Poly<T>, Poly<T>) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dlc_inv = divisor.lc().unwrap().inv().expect("field element");
        let ddeg = divisor.degree().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() < divisor.coeffs.len() {
            return (Poly::zero(self.ctx.clone()), self.clone());
        }
        let qlen = rem.len() - ddeg;
        let mut quo = vec![self.ctx.zero_like(); qlen];
        for i in (0..qlen).rev() {
            let c = rem[i + ddeg].mul(&dlc_inv);
            if c.is_zero() {
                continue;
            }
            quo[i] = c.clone();
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j].sub(&c.mul(d));
            }
        }
        (
            Poly::new(self.ctx.clone(), quo),
            Poly::new(self.ctx.clone(), rem),
        )
    }

    pub fn rem(&self, divisor: &Poly<T>) -> Poly<T> {
        self.divrem(divisor).1
    }

    pub fn monic(&self) -> Poly<T> {
        match self.lc() {
            None => self.clone(),
            Some(lc) => self.scale(&lc.inv().expect("nonzero lc")),
        }
    }

    pub fn gcd(&self, other: &Poly<T>) -> Poly<T> {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// f / gcd(f, f'): same roots, all simple.
    pub fn squarefree_part(&self) -> Poly<T> {
        if self.is_zero() {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            return self.clone();
        }
        self.divrem(&g).0
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Substitute x -> g(x).
    pub fn compose(&self, g: &Poly<T>) -> Poly<T> {
        let mut acc = Poly::zero(self.ctx.clone());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&Poly::constant(c.clone()));
        }
        acc
    }

    /// Resultant of two polynomials over the coefficient field.
    pub fn resultant(&self, other: &Poly<T>) -> T {
        fn go<T: FieldElem>(f: &Poly<T>, g: &Poly<T>) -> T {
            if g.is_zero() {
                return f.ctx.zero_like();
            }
            let n = f.degree().unwrap_or(0);
            let m = g.degree().unwrap();
            if m == 0 {
                return g.lc().unwrap().pow_u32(n as u32);
            }
            if f.is_zero() {
                return f.ctx.zero_like();
            }
            let r = f.rem(g);
            if r.is_zero() {
                return f.ctx.zero_like();
            }
            let d = r.degree().unwrap();
            let sign = if (n * m) % 2 == 1 { -1i64 } else { 1 };
            let lead = g.lc().unwrap().pow_u32((n - d) as u32);
            let sub = go(&g.clone(), &r);
            lead.mul(&sub)
                .mul(&f.ctx.from_i64_like(sign))
        }
        if self.is_zero() || other.is_zero() {
            return self.ctx.zero_like();
        }
        go(self, other)
    }

    /// All roots lying in a finite enumeration of candidate values.
    pub fn roots_among<'a, I: IntoIterator<Item = &'a T>>(&self, candidates: I) -> Vec<T>
    where
        T: 'a,
    {
        candidates
            .into_iter()
            .filter(|x| self.eval(x).is_zero())
            .cloned()
            .collect()
    }
}

/// Extended gcd over a field: returns (g, s, t) with s*a + t*b = g, g monic.
pub fn xgcd<T: FieldElem>(a: &Poly<T>, b: &Poly<T>) -> (Poly<T>, Poly<T>, Poly<T>) {
    let ctx = a.ctx().clone();
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    let mut s0 = Poly::constant(ctx.one_like());
    let mut s1 = Poly::zero(ctx.clone());
    let mut t0 = Poly::zero(ctx.clone());
    let mut t1 = Poly::constant(ctx.one_like());
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1);
        let s = s0.sub(&q.mul(&s1));
        let t = t0.sub(&q.mul(&t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    if let Some(lc) = r0.lc() {
        let inv = lc.inv().expect("nonzero leading coefficient");
        return (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv));
    }
    (r0, s0, t0)
}

/// Lagrange interpolation through (x_i, y_i) with distinct x_i.
pub fn interpolate<T: FieldElem>(ctx: &T, points: &[(T, T)]) -> Poly<T> {
    let mut acc = Poly::zero(ctx.clone());
    for (i, (xi, yi)) in points.iter().enumerate() {
        let mut num = Poly::constant(yi.clone());
        let mut den = ctx.one_like();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let lin = Poly::new(ctx.clone(), vec![xj.neg(), ctx.one_like()]);
            num = num.mul(&lin);
            den = den.mul(&xi.sub(xj));
        }
        acc = acc.add(&num.scale(&den.inv().expect("distinct nodes")));
    }
    acc
}

// ---------------------------------------------------------------------------
// Sturm real-root counting over Q
// ---------------------------------------------------------------------------

pub type PolyQ = Poly<BigRational>;

fn sign_at_inf(p: &PolyQ, positive_inf: bool) -> i32 {
    match p.lc() {
        None => 0,
        Some(lc) => {
            let s = if lc.is_positive() { 1 } else { -1 };
            if positive_inf {
                s
            } else {
                let deg = p.degree().unwrap();
                if deg % 2 == 0 {
                    s
                } else {
                    -s
                }
            }
        }
    }
}

fn variations(signs: &[i32]) -> usize {
    let mut count = 0;
    let mut last = 0;
    for &s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Exact number of distinct real roots of a nonzero rational polynomial,
/// via the Sturm chain of its squarefree part.
pub fn sturm_real_roots(f: &PolyQ) -> Result<usize, &'static str> {
    if f.is_zero() {
        return Err("zero polynomial");
    }
    let f = f.squarefree_part();
    if f.degree() == Some(0) {
        return Ok(0);
    }
    let mut chain = vec![f.clone(), f.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let r = chain[n - 2].rem(&chain[n - 1]).neg();
        if r.is_zero() {
            break;
        }
        chain.push(r);
    }
    let at_minus: Vec<i32> = chain.iter().map(|p| sign_at_inf(p, false)).collect();
    let at_plus: Vec<i32> = chain.iter().map(|p| sign_at_inf(p, true)).collect();
    Ok(variations(&at_minus) - variations(&at_plus))
}

// ---------------------------------------------------------------------------
// Bivariate polynomials over Q (coefficients of y^i are polynomials in x)
// ---------------------------------------------------------------------------

/// Polynomial in x and y over Q, stored as rows[i] = coefficient of y^i.
#[derive(Debug, Clone, PartialEq)]
pub struct BivarQ {
    rows: Vec<PolyQ>,
}

impl BivarQ {
    pub fn new(mut rows: Vec<PolyQ>) -> BivarQ {
        while rows.last().map(|r| r.is_zero()).unwrap_or(false) {
            rows.pop();
        }
        BivarQ { rows }
    }

    pub fn zero() -> BivarQ {
        BivarQ { rows: Vec::new() }
    }

    /// Build from monomial list (coefficient, x-degree, y-degree).
    pub fn from_monomials(terms: &[(i64, usize, usize)]) -> BivarQ {
        let ctx = BigRational::zero();
        let ydeg = terms.iter().map(|t| t.2).max().unwrap_or(0);
        let mut rows = vec![Poly::zero(ctx.clone()); ydeg + 1];
        for &(c, dx, dy) in terms {
            let mono = Poly::monomial(&ctx, BigRational::from_integer(c.into()), dx);
            rows[dy] = rows[dy].add(&mono);
        }
        BivarQ::new(rows)
    }

    pub fn rows(&self) -> &[PolyQ] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn deg_y(&self) -> Option<usize> {
        if self.rows.is_empty() {
            None
        } else {
            Some(self.rows.len() - 1)
        }
    }

    pub fn add(&self, other: &BivarQ) -> BivarQ {
        let ctx = BigRational::zero();
        let n = self.rows.len().max(other.rows.len());
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.rows.get(i).cloned().unwrap_or_else(|| Poly::zero(ctx.clone()));
            let b = other
                .rows
                .get(i)
                .cloned()
                .unwrap_or_else(|| Poly::zero(ctx.clone()));
            rows.push(a.add(&b));
        }
        BivarQ::new(rows)
    }

    pub fn neg(&self) -> BivarQ {
        BivarQ::new(self.rows.iter().map(|r| r.neg()).collect())
    }

    pub fn sub(&self, other: &BivarQ) -> BivarQ {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &BivarQ) -> BivarQ {
        if self.is_zero() || other.is_zero() {
            return BivarQ::zero();
        }
        let ctx = BigRational::zero();
        let mut rows = vec![Poly::zero(ctx); self.rows.len() + other.rows.len() - 1];
        for (i, a) in self.rows.iter().enumerate() {
            for (j, b) in other.rows.iter().enumerate() {
                rows[i + j] = rows[i + j].add(&a.mul(b));
            }
        }
        BivarQ::new(rows)
    }

    /// Specialize x = x0, leaving a univariate polynomial in y.
    pub fn eval_x(&self, x0: &BigRational) -> PolyQ {
        Poly::new(
            BigRational::zero(),
            self.rows.iter().map(|r| r.eval(x0)).collect(),
        )
    }

    /// Specialize y = y0, leaving a univariate polynomial in x.
    pub fn eval_y(&self, y0: &BigRational) -> PolyQ {
        let ctx = BigRational::zero();
        let mut acc = Poly::zero(ctx);
        let mut pow = BigRational::one();
        for r in &self.rows {
            acc = acc.add(&r.scale(&pow));
            pow *= y0;
        }
        acc
    }

    pub fn eval(&self, x0: &BigRational, y0: &BigRational) -> BigRational {
        self.eval_x(x0).eval(y0)
    }

    pub fn deg_x(&self) -> usize {
        self.rows
            .iter()
            .filter_map(|r| r.degree())
            .max()
            .unwrap_or(0)
    }
}

/// Resultant of two bivariate polynomials with respect to y, computed by
/// specialization and interpolation. Sample points avoid vanishing leading
/// rows so each specialization keeps full y-degree.
pub fn resultant_y(a: &BivarQ, b: &BivarQ) -> PolyQ {
    let ctx = BigRational::zero();
    if a.is_zero() || b.is_zero() {
        return Poly::zero(ctx);
    }
    let da = a.deg_y().unwrap();
    let db = b.deg_y().unwrap();
    let bound = da * b.deg_x() + db * a.deg_x() + 1;
    let lead_a = &a.rows[da];
    let lead_b = &b.rows[db];
    let mut points = Vec::with_capacity(bound);
    let mut t: i64 = 0;
    while points.len() < bound {
        let x0 = BigRational::from_integer(t.into());
        if !Zero::is_zero(&lead_a.eval(&x0)) && !Zero::is_zero(&lead_b.eval(&x0)) {
            let fa = a.eval_x(&x0);
            let fb = b.eval_x(&x0);
            points.push((x0, fa.resultant(&fb)));
        }
        t = if t >= 0 { -(t + 1) } else { -t };
    }
    interpolate(&ctx, &points)
}

/// Rational roots of a rational polynomial, by the rational root theorem
/// applied to the integer-cleared form.
pub fn rational_roots(f: &PolyQ) -> Vec<BigRational> {
    use crate::arith::factor;
    use num_bigint::BigInt;
    if f.is_zero() {
        return Vec::new();
    }
    let f = f.squarefree_part();
    if f.degree() == Some(0) {
        return Vec::new();
    }
    // Clear denominators.
    let mut den = BigInt::one();
    for c in f.coeffs() {
        den = num_integer::lcm(den, c.denom().clone());
    }
    let ints: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|c| (c.numer() * &den) / c.denom())
        .collect();
    // Strip powers of x.
    let shift = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
    let mut roots: Vec<BigRational> = Vec::new();
    if shift > 0 {
        roots.push(BigRational::zero());
    }
    let ints = &ints[shift..];
    if ints.len() <= 1 {
        return roots;
    }
    let a0 = ints[0].clone();
    let an = ints.last().unwrap().clone();
    let divisors = |n: &BigInt| -> Vec<BigInt> {
        let mut out = vec![BigInt::one()];
        if let Some(fac) = factor(&n.abs()) {
            for (p, e) in fac {
                let mut next = Vec::new();
                for d in &out {
                    let mut pe = BigInt::one();
                    for _ in 0..=e {
                        next.push(d * &pe);
                        pe *= &p;
                    }
                }
                out = next;
            }
        }
        out.sort();
        out.dedup();
        out
    };
    for p in divisors(&a0) {
        for q in divisors(&an) {
            for sign in [1i64, -1] {
                let cand = BigRational::new(&p * BigInt::from(sign), q.clone());
                if Zero::is_zero(&f.eval(&cand)) && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort();
    roots
}
