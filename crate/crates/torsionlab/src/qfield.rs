//! Exact arithmetic in the nine imaginary quadratic fields of class number 1,
//! K = Q(sqrt(D)) with D in {-1,-2,-3,-7,-11,-19,-43,-67,-163}.

use crate::arith::{
    big, mod_inverse, rat_round, rat_sqrt_exact, sqrt_mod_p, valuation, Primes,
};
use crate::ff::FFElem;
use crate::field::FieldElem;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// The nine admissible D values. The paper's set S excludes the two
/// cyclotomic fields D = -1, -3; the full set is called T.
pub const ALL_D: [i64; 9] = [-1, -2, -3, -7, -11, -19, -43, -67, -163];

/// D values for the set S (non-cyclotomic, class number 1).
pub const S_D: [i64; 7] = [-2, -7, -11, -19, -43, -67, -163];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QFieldError {
    DivisionByZero,
    MixedFields,
    NotSplitPrime,
    DenominatorDivisibleByP,
    UnsupportedDiscriminant(i64),
    Syntax { pos: usize, msg: String },
}

impl fmt::Display for QFieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QFieldError::DivisionByZero => write!(f, "division by zero"),
            QFieldError::MixedFields => write!(f, "operands lie in different fields"),
            QFieldError::NotSplitPrime => write!(f, "prime is not split"),
            QFieldError::DenominatorDivisibleByP => {
                write!(f, "denominator divisible by the residue characteristic")
            }
            QFieldError::UnsupportedDiscriminant(d) => {
                write!(f, "D = {d} is not one of the nine class-number-1 values")
            }
            QFieldError::Syntax { pos, msg } => write!(f, "syntax error at position {pos}: {msg}"),
        }
    }
}

impl std::error::Error for QFieldError {}

/// Tag identifying one of the nine fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldTag {
    d: i64,
}

impl FieldTag {
    pub fn new(d: i64) -> Result<FieldTag, QFieldError> {
        if ALL_D.contains(&d) {
            Ok(FieldTag { d })
        } else {
            Err(QFieldError::UnsupportedDiscriminant(d))
        }
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// Membership in the paper's set S (excludes D = -1 and D = -3).
    pub fn in_s(&self) -> bool {
        self.d != -1 && self.d != -3
    }

    /// True when D = 1 mod 4, i.e. the ring of integers is Z[(1+sqrt(D))/2].
    pub fn half_integral_basis(&self) -> bool {
        self.d.rem_euclid(4) == 1
    }

    /// Field discriminant: D if D = 1 mod 4, else 4D.
    pub fn disc(&self) -> i64 {
        if self.half_integral_basis() {
            self.d
        } else {
            4 * self.d
        }
    }

    pub fn zero(&self) -> QuadElem {
        QuadElem::from_rational(*self, BigRational::zero())
    }

    pub fn one(&self) -> QuadElem {
        QuadElem::from_rational(*self, BigRational::one())
    }

    pub fn from_i64(&self, n: i64) -> QuadElem {
        QuadElem::from_rational(*self, BigRational::from_integer(big(n)))
    }

    /// sqrt(D) as an element of K.
    pub fn gen(&self) -> QuadElem {
        QuadElem::new(*self, BigRational::zero(), BigRational::one())
    }

    pub fn elem(&self, a: BigRational, b: BigRational) -> QuadElem {
        QuadElem::new(*self, a, b)
    }
}

/// An element a + b*sqrt(D) of K with exact rational coordinates.
/// BigRational keeps both coordinates fully reduced, so equality is
/// coordinate-wise on the nose.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadElem {
    tag: FieldTag,
    a: BigRational,
    b: BigRational,
}

impl QuadElem {
    pub fn new(tag: FieldTag, a: BigRational, b: BigRational) -> QuadElem {
        QuadElem { tag, a, b }
    }

    pub fn from_rational(tag: FieldTag, a: BigRational) -> QuadElem {
        QuadElem {
            tag,
            a,
            b: BigRational::zero(),
        }
    }

    pub fn tag(&self) -> FieldTag {
        self.tag
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn is_rational(&self) -> bool {
        Zero::is_zero(&self.b)
    }

    /// The rational value when b = 0.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if Zero::is_zero(&self.b) {
            Some(&self.a)
        } else {
            None
        }
    }

    fn check_tag(&self, other: &QuadElem) -> Result<(), QFieldError> {
        if self.tag != other.tag {
            Err(QFieldError::MixedFields)
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &QuadElem) -> QuadElem {
        debug_assert_eq!(self.tag, other.tag);
        QuadElem::new(self.tag, &self.a + &other.a, &self.b + &other.b)
    }

    pub fn sub(&self, other: &QuadElem) -> QuadElem {
        debug_assert_eq!(self.tag, other.tag);
        QuadElem::new(self.tag, &self.a - &other.a, &self.b - &other.b)
    }

    pub fn neg(&self) -> QuadElem {
        QuadElem::new(self.tag, -self.a.clone(), -self.b.clone())
    }

    pub fn mul(&self, other: &QuadElem) -> QuadElem {
        debug_assert_eq!(self.tag, other.tag);
        let d = BigRational::from_integer(big(self.tag.d));
        let a = &self.a * &other.a + &d * &self.b * &other.b;
        let b = &self.a * &other.b + &self.b * &other.a;
        QuadElem::new(self.tag, a, b)
    }

    pub fn mul_rat(&self, r: &BigRational) -> QuadElem {
        QuadElem::new(self.tag, &self.a * r, &self.b * r)
    }

    pub fn inv(&self) -> Option<QuadElem> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        let c = self.conj();
        Some(QuadElem::new(self.tag, &c.a / &n, &c.b / &n))
    }

    pub fn div(&self, other: &QuadElem) -> Option<QuadElem> {
        other.inv().map(|i| self.mul(&i))
    }

    pub fn is_zero(&self) -> bool {
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b)
    }

    pub fn conj(&self) -> QuadElem {
        QuadElem::new(self.tag, self.a.clone(), -self.b.clone())
    }

    /// Norm a^2 - D b^2 (always >= 0 for imaginary D).
    pub fn norm(&self) -> BigRational {
        let d = BigRational::from_integer(big(self.tag.d));
        &self.a * &self.a - d * &self.b * &self.b
    }

    /// Trace 2a.
    pub fn trace(&self) -> BigRational {
        &self.a + &self.a
    }

    pub fn square(&self) -> QuadElem {
        self.mul(self)
    }

    /// Membership in the ring of integers O_K: trace and norm are rational
    /// integers.
    pub fn is_integral(&self) -> bool {
        self.trace().is_integer() && self.norm().is_integer()
    }

    /// Coordinates (x, y) in the integral basis 1, omega, when integral.
    /// omega = (1+sqrt(D))/2 if D = 1 mod 4, else sqrt(D).
    pub fn omega_coords(&self) -> Option<(BigInt, BigInt)> {
        if !self.is_integral() {
            return None;
        }
        if self.tag.half_integral_basis() {
            // a + b sqrt(D) = (a - b) + 2b * omega requires y = 2b integral
            let y = &self.b + &self.b;
            let x = &self.a - &self.b;
            if y.is_integer() && x.is_integer() {
                Some((x.to_integer(), y.to_integer()))
            } else {
                None
            }
        } else if self.a.is_integer() && self.b.is_integer() {
            Some((self.a.to_integer(), self.b.to_integer()))
        } else {
            None
        }
    }

    pub fn from_omega_coords(tag: FieldTag, x: &BigInt, y: &BigInt) -> QuadElem {
        if tag.half_integral_basis() {
            let half = BigRational::new(big(1), big(2));
            let a = BigRational::from_integer(x.clone()) + &half * BigRational::from_integer(y.clone());
            let b = half * BigRational::from_integer(y.clone());
            QuadElem::new(tag, a, b)
        } else {
            QuadElem::new(
                tag,
                BigRational::from_integer(x.clone()),
                BigRational::from_integer(y.clone()),
            )
        }
    }

    /// Canonical sign: first nonzero rational coordinate positive.
    pub fn canonical_sign(self) -> QuadElem {
        let flip = if !Zero::is_zero(&self.a) {
            self.a.is_negative()
        } else {
            self.b.is_negative()
        };
        if flip {
            self.neg()
        } else {
            self
        }
    }

    /// Square root in K, when one exists. Canonical sign: first nonzero
    /// rational coordinate positive.
    pub fn sqrt_in_k(&self) -> Option<QuadElem> {
        let tag = self.tag;
        let d = BigRational::from_integer(big(tag.d));
        if self.is_zero() {
            return Some(tag.zero());
        }
        if Zero::is_zero(&self.b) {
            // (p)^2 = a or (q sqrt(D))^2 = D q^2 = a
            if let Some(p) = rat_sqrt_exact(&self.a) {
                return Some(QuadElem::from_rational(tag, p).canonical_sign());
            }
            let q2 = &self.a / &d;
            if let Some(q) = rat_sqrt_exact(&q2) {
                return Some(QuadElem::new(tag, BigRational::zero(), q).canonical_sign());
            }
            return None;
        }
        // (p + q sqrt(D))^2 = a + b sqrt(D) with b != 0: need delta^2 = a^2 - D b^2,
        // then p^2 = (a +/- delta)/2 and q = b / (2p).
        let delta = rat_sqrt_exact(&self.norm())?;
        let two = BigRational::from_integer(big(2));
        for sign in [1i64, -1] {
            let p2 = (&self.a + BigRational::from_integer(big(sign)) * &delta) / &two;
            if let Some(p) = rat_sqrt_exact(&p2) {
                if Zero::is_zero(&p) {
                    continue;
                }
                let q = &self.b / (&two * &p);
                let cand = QuadElem::new(tag, p, q);
                if cand.square() == *self {
                    return Some(cand.canonical_sign());
                }
            }
        }
        None
    }

    pub fn is_square(&self) -> bool {
        self.sqrt_in_k().is_some()
    }

    /// Largest power of the rational prime p dividing the denominators.
    pub fn denom_valuation(&self, p: u64) -> u32 {
        let pb = big(p as i64);
        let va = if Zero::is_zero(&self.a) {
            0
        } else {
            valuation(self.a.denom(), &pb)
        };
        let vb = if Zero::is_zero(&self.b) {
            0
        } else {
            valuation(self.b.denom(), &pb)
        };
        va.max(vb)
    }
}

/// The four field operations with explicit error reporting.
pub fn field_arith(x: &QuadElem, y: &QuadElem, op: char) -> Result<QuadElem, QFieldError> {
    x.check_tag(y)?;
    match op {
        '+' => Ok(x.add(y)),
        '-' => Ok(x.sub(y)),
        '*' => Ok(x.mul(y)),
        '/' => x.div(y).ok_or(QFieldError::DivisionByZero),
        _ => panic!("unknown operation {op}"),
    }
}

/// Conjugate, norm and trace in one call.
pub fn conj_norm_trace(x: &QuadElem) -> (QuadElem, BigRational, BigRational) {
    (x.conj(), x.norm(), x.trace())
}

// ---------------------------------------------------------------------------
// Prime splitting
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitKind {
    Split,
    Inert,
    Ramified,
}

/// A rational prime together with its behavior in O_K. For split and
/// ramified primes, r satisfies r^2 = D (mod p).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeIdealRep {
    pub p: u64,
    pub kind: SplitKind,
    pub r: Option<u64>,
    pub tag: FieldTag,
}

impl PrimeIdealRep {
    /// Size of the residue field.
    pub fn residue_size(&self) -> u64 {
        match self.kind {
            SplitKind::Inert => self.p * self.p,
            _ => self.p,
        }
    }
}

/// Behavior of the rational prime p in O_K by the quadratic-residue rule;
/// p = 2 is decided by the discriminant.
pub fn splitting_type(p: u64, tag: FieldTag) -> PrimeIdealRep {
    let d = tag.d();
    if p == 2 {
        return if !tag.half_integral_basis() {
            PrimeIdealRep {
                p,
                kind: SplitKind::Ramified,
                r: Some((d.rem_euclid(2)) as u64),
                tag,
            }
        } else if d.rem_euclid(8) == 1 {
            PrimeIdealRep {
                p,
                kind: SplitKind::Split,
                r: Some(1),
                tag,
            }
        } else {
            PrimeIdealRep {
                p,
                kind: SplitKind::Inert,
                r: None,
                tag,
            }
        };
    }
    let dmod = d.rem_euclid(p as i64) as u64;
    if dmod == 0 {
        return PrimeIdealRep {
            p,
            kind: SplitKind::Ramified,
            r: Some(0),
            tag,
        };
    }
    match sqrt_mod_p(dmod, p) {
        Some(r) => PrimeIdealRep {
            p,
            kind: SplitKind::Split,
            r: Some(r.min(p - r)),
            tag,
        },
        None => PrimeIdealRep {
            p,
            kind: SplitKind::Inert,
            r: None,
            tag,
        },
    }
}

fn rational_mod_p(q: &BigRational, p: u64) -> Result<u64, QFieldError> {
    let pb = big(p as i64);
    let den = q.denom().mod_floor(&pb);
    if den.is_zero() {
        return Err(QFieldError::DenominatorDivisibleByP);
    }
    let num = q.numer().mod_floor(&pb);
    let num = num.to_u64_digits().1.first().copied().unwrap_or(0);
    let den = den.to_u64_digits().1.first().copied().unwrap_or(0);
    let inv = crate::arith::inv_mod_u64(den, p).ok_or(QFieldError::DenominatorDivisibleByP)?;
    Ok(crate::arith::mul_mod_u64(num, inv, p))
}

/// Reduce x modulo the prime P. Split and ramified: substitute sqrt(D) -> r
/// in F_p; inert: image in F_{p^2} = F_p[s]/(s^2 - D).
pub fn reduce_mod(x: &QuadElem, prime: &PrimeIdealRep) -> Result<FFElem, QFieldError> {
    let p = prime.p;
    let a = rational_mod_p(&x.a, p)?;
    let b = rational_mod_p(&x.b, p)?;
    match prime.kind {
        SplitKind::Split | SplitKind::Ramified => {
            let r = prime.r.expect("split/ramified primes carry r");
            Ok(FFElem::prime_field(
                p,
                (a + crate::arith::mul_mod_u64(b, r, p)) % p,
            ))
        }
        SplitKind::Inert => {
            let dmod = (prime.tag.d().rem_euclid(p as i64)) as u64;
            Ok(FFElem::quadratic(p, dmod, a, b))
        }
    }
}

// ---------------------------------------------------------------------------
// Lattice reconstruction (inverse of the split-prime reduction)
// ---------------------------------------------------------------------------

fn dot(u: &(BigInt, BigInt), v: &(BigInt, BigInt)) -> BigInt {
    &u.0 * &v.0 + &u.1 * &v.1
}

/// Lagrange-Gauss reduction of a rank-2 integer lattice basis.
fn gauss_reduce(mut u: (BigInt, BigInt), mut v: (BigInt, BigInt)) -> ((BigInt, BigInt), (BigInt, BigInt)) {
    loop {
        if dot(&u, &u) < dot(&v, &v) {
            std::mem::swap(&mut u, &mut v);
        }
        let denom = dot(&v, &v);
        if denom.is_zero() {
            return (u, v);
        }
        let m = rat_round(&BigRational::new(dot(&u, &v), denom));
        if m.is_zero() {
            return (v, u);
        }
        u = (&u.0 - &m * &v.0, &u.1 - &m * &v.1);
    }
}

/// Image of omega modulo p^k, lifting the mod-p square root of D by Hensel.
pub fn omega_mod_prime_power(tag: FieldTag, p: u64, k: u32) -> Result<BigInt, QFieldError> {
    let split = splitting_type(p, tag);
    if split.kind != SplitKind::Split || p == 2 {
        return Err(QFieldError::NotSplitPrime);
    }
    let d = big(tag.d());
    let mut modulus = big(p as i64);
    let mut r = big(split.r.unwrap() as i64);
    let target = big(p as i64).pow(k);
    // Newton iteration on x^2 - D doubles the precision each round.
    while modulus < target {
        modulus = (&modulus * &modulus).min(target.clone());
        let two_r_inv = mod_inverse(&(&r * 2), &modulus).expect("2r invertible at odd split p");
        let val = (&r * &r - &d) % &modulus;
        r = (&r - val * two_r_inv).mod_floor(&modulus);
    }
    let r = r.mod_floor(&target);
    if tag.half_integral_basis() {
        let inv2 = mod_inverse(&big(2), &target).expect("2 invertible, p odd");
        Ok(((big(1) + r) * inv2).mod_floor(&target))
    } else {
        Ok(r)
    }
}

/// Find the integral element a + b*omega congruent to c mod p^k with
/// max(|a|,|b|) <= height_bound, by closest-vector search in the kernel
/// lattice. Absent when nothing lies inside the box.
pub fn reconstruct_from_residue(
    c: &BigInt,
    p: u64,
    k: u32,
    tag: FieldTag,
    height_bound: &BigInt,
) -> Result<Option<QuadElem>, QFieldError> {
    let omega = omega_mod_prime_power(tag, p, k)?;
    let pk = big(p as i64).pow(k);
    let c = c.mod_floor(&pk);
    // Lattice of (a, b) with a + b*omega = 0 (mod p^k).
    let basis_u = (pk.clone(), BigInt::zero());
    let basis_v = (-omega, BigInt::one());
    let (v1, v2) = gauss_reduce(basis_u, basis_v);
    // Babai rounding of the target (-c, 0) in the reduced basis, then check
    // the 3x3 neighborhood.
    let target = (-c.clone(), BigInt::zero());
    let det = &v1.0 * &v2.1 - &v1.1 * &v2.0;
    if det.is_zero() {
        return Ok(None);
    }
    let s_num = &target.0 * &v2.1 - &target.1 * &v2.0;
    let t_num = &v1.0 * &target.1 - &v1.1 * &target.0;
    let s = rat_round(&BigRational::new(s_num, det.clone()));
    let t = rat_round(&BigRational::new(t_num, det.clone()));
    let mut best: Option<(BigInt, BigInt)> = None;
    for ds in -1i64..=1 {
        for dt in -1i64..=1 {
            let ss = &s + big(ds);
            let tt = &t + big(dt);
            let a = &ss * &v1.0 + &tt * &v2.0 - &target.0;
            let b = &ss * &v1.1 + &tt * &v2.1 - &target.1;
            // (a, b) = (c, 0) + lattice vector, so a + b*omega = c (mod p^k).
            if a.abs() <= *height_bound && b.abs() <= *height_bound {
                let better = match &best {
                    None => true,
                    Some((ba, bb)) => {
                        (&a * &a + &b * &b) < (ba * ba + bb * bb)
                    }
                };
                if better {
                    best = Some((a, b));
                }
            }
        }
    }
    Ok(best.map(|(a, b)| QuadElem::from_omega_coords(tag, &a, &b)))
}

/// Smallest split primes of K (odd, increasing).
pub fn split_primes(tag: FieldTag) -> impl Iterator<Item = PrimeIdealRep> {
    Primes::new().filter_map(move |p| {
        if p == 2 {
            return None;
        }
        let s = splitting_type(p, tag);
        if s.kind == SplitKind::Split {
            Some(s)
        } else {
            None
        }
    })
}

// ---------------------------------------------------------------------------
// Printing and parsing
// ---------------------------------------------------------------------------

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print_elem(self))
    }
}

fn print_b_part(b: &BigRational) -> String {
    if One::is_one(b) {
        "w".to_string()
    } else if *b == -BigRational::one() {
        "-w".to_string()
    } else {
        format!("{b}*w")
    }
}

/// Canonical printing "a + b*w" with reduced rationals.
pub fn print_elem(x: &QuadElem) -> String {
    if Zero::is_zero(&x.b) {
        return format!("{}", x.a);
    }
    if Zero::is_zero(&x.a) {
        return print_b_part(&x.b);
    }
    if x.b.is_negative() {
        let nb = -x.b.clone();
        let part = if One::is_one(&nb) {
            "w".to_string()
        } else {
            format!("{nb}*w")
        };
        format!("{} - {}", x.a, part)
    } else {
        format!("{} + {}", x.a, print_b_part(&x.b))
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    tag: FieldTag,
    _src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, tag: FieldTag) -> Self {
        Parser {
            chars: src.chars().collect(),
            pos: 0,
            tag,
            _src: src,
        }
    }

    fn err(&self, msg: &str) -> QFieldError {
        QFieldError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        self.skip_ws();
        let c = self.chars.get(self.pos).copied();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn expr(&mut self) -> Result<QuadElem, QFieldError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                '-' => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<QuadElem, QFieldError> {
        let mut acc = self.factor()?;
        while let Some(c) = self.peek() {
            match c {
                '*' => {
                    self.bump();
                    acc = acc.mul(&self.factor()?);
                }
                '/' => {
                    self.bump();
                    let rhs = self.factor()?;
                    acc = acc.div(&rhs).ok_or(QFieldError::DivisionByZero)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<QuadElem, QFieldError> {
        match self.peek() {
            Some('-') => {
                self.bump();
                Ok(self.factor()?.neg())
            }
            Some('+') => {
                self.bump();
                self.factor()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<QuadElem, QFieldError> {
        match self.peek() {
            Some('(') => {
                self.bump();
                let inner = self.expr()?;
                match self.bump() {
                    Some(')') => Ok(inner),
                    _ => Err(self.err("expected ')'")),
                }
            }
            Some('w') => {
                self.bump();
                Ok(self.tag.gen())
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self
                    .chars
                    .get(self.pos)
                    .map(|c| c.is_ascii_digit())
                    .unwrap_or(false)
                {
                    self.pos += 1;
                }
                let text: String = self.chars[start..self.pos].iter().collect();
                let n = BigInt::parse_bytes(text.as_bytes(), 10)
                    .ok_or_else(|| self.err("bad integer literal"))?;
                Ok(QuadElem::from_rational(
                    self.tag,
                    BigRational::from_integer(n),
                ))
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parse the element grammar: integer literals, `w` for sqrt(D), operators
/// + - * / and parentheses with the usual precedence. Exact constant folding.
pub fn parse_elem(text: &str, tag: FieldTag) -> Result<QuadElem, QFieldError> {
    let mut parser = Parser::new(text, tag);
    let value = parser.expr()?;
    parser.skip_ws();
    if parser.pos != parser.chars.len() {
        return Err(parser.err("trailing input"));
    }
    Ok(value)
}

// ---------------------------------------------------------------------------
// FieldElem impl
// ---------------------------------------------------------------------------

impl FieldElem for QuadElem {
    fn zero_like(&self) -> Self {
        self.tag.zero()
    }
    fn one_like(&self) -> Self {
        self.tag.one()
    }
    fn from_i64_like(&self, n: i64) -> Self {
        self.tag.from_i64(n)
    }
    fn add(&self, other: &Self) -> Self {
        QuadElem::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        QuadElem::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        QuadElem::mul(self, other)
    }
    fn neg(&self) -> Self {
        QuadElem::neg(self)
    }
    fn inv(&self) -> Option<Self> {
        QuadElem::inv(self)
    }
    fn is_zero(&self) -> bool {
        QuadElem::is_zero(self)
    }
    fn sqrt(&self) -> Option<Self> {
        self.sqrt_in_k()
    }
    fn canon_string(&self) -> String {
        print_elem(self)
    }
}
