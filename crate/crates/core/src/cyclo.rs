//! Exact arithmetic in the cyclotomic field Q(ω), ω = exp(2πi/N).
//!
//! Elements are polynomials in ω with rational coefficients, reduced modulo
//! the N-th cyclotomic polynomial Φ_N so that every nonzero element is
//! invertible. This is the slow, exact counterpart of [`crate::invariant`]
//! and is only meant for small N.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, KnotId, Result};

/// Largest number of summed terms accepted by [`exact_invariant`].
pub const EXACT_TERM_BUDGET: u64 = 1_000_000;

/// Coefficients of Φ_N in ascending degree order.
pub fn cyclotomic_polynomial(n: u64) -> Result<Vec<BigInt>> {
    if n == 0 {
        return Err(Error::InvalidOrder(0));
    }
    let mut memo = HashMap::new();
    Ok(cyclotomic_memo(n, &mut memo))
}

fn cyclotomic_memo(n: u64, memo: &mut HashMap<u64, Vec<BigInt>>) -> Vec<BigInt> {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    // x^n - 1 = prod_{d | n} Φ_d(x)
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        let phi_d = cyclotomic_memo(d, memo);
        num = div_exact_monic(&num, &phi_d);
    }
    memo.insert(n, num.clone());
    num
}

/// Quotient of `num` by the monic `den`; the division must be exact.
fn div_exact_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    quot
}

/// Q(ω) for a fixed order N, with Φ_N and the reduced powers of ω cached.
#[derive(Debug)]
pub struct CyclotomicField {
    order: u64,
    modulus: Vec<BigRational>,
    omega_powers: Vec<Vec<BigRational>>,
}

impl CyclotomicField {
    pub fn new(order: u64) -> Result<Arc<Self>> {
        let modulus: Vec<BigRational> = cyclotomic_polynomial(order)?
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        let degree = modulus.len() - 1;
        let mut field = CyclotomicField {
            order,
            modulus,
            omega_powers: Vec::with_capacity(order as usize),
        };
        let mut power = vec![BigRational::zero(); degree];
        power[0] = BigRational::one();
        for _ in 0..order {
            field.omega_powers.push(power.clone());
            let mut shifted = vec![BigRational::zero()];
            shifted.extend(power);
            power = field.reduce(shifted);
        }
        Ok(Arc::new(field))
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// deg Φ_N, i.e. Euler's totient of N.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    fn reduce(&self, mut p: Vec<BigRational>) -> Vec<BigRational> {
        let d = self.degree();
        for i in (d..p.len()).rev() {
            if p[i].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut p[i], BigRational::zero());
            for j in 0..d {
                p[i - d + j] -= &c * &self.modulus[j];
            }
        }
        p.resize(d, BigRational::zero());
        p
    }
}

/// An element of Q(ω), stored as its coefficient vector modulo Φ_N.
#[derive(Clone)]
pub struct CycElement {
    field: Arc<CyclotomicField>,
    coeffs: Vec<BigRational>,
}

impl CycElement {
    pub fn zero(field: &Arc<CyclotomicField>) -> Self {
        CycElement {
            field: field.clone(),
            coeffs: vec![BigRational::zero(); field.degree()],
        }
    }

    pub fn one(field: &Arc<CyclotomicField>) -> Self {
        Self::from_integer(field, 1)
    }

    pub fn from_integer(field: &Arc<CyclotomicField>, value: i64) -> Self {
        let mut e = Self::zero(field);
        e.coeffs[0] = BigRational::from_integer(value.into());
        e
    }

    /// Builds an element from coefficients of 1, ω, ω², …; any length is
    /// accepted and reduced.
    pub fn from_coeffs(field: &Arc<CyclotomicField>, coeffs: Vec<BigRational>) -> Self {
        let mut p = coeffs;
        if p.len() < field.degree() {
            p.resize(field.degree(), BigRational::zero());
        }
        CycElement {
            field: field.clone(),
            coeffs: field.reduce(p),
        }
    }

    /// ω^e for any integer e; the exponent is reduced mod N first.
    pub fn omega_pow(field: &Arc<CyclotomicField>, e: i64) -> Self {
        let idx = e.rem_euclid(field.order as i64) as usize;
        CycElement {
            field: field.clone(),
            coeffs: field.omega_powers[idx].clone(),
        }
    }

    pub fn order(&self) -> u64 {
        self.field.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value if the element lies in Q.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    /// Complex conjugation: ω ↦ ω^(N−1).
    pub fn conj(&self) -> Self {
        let n = self.field.order as i64;
        let mut acc = vec![BigRational::zero(); self.field.degree()];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let p = &self.field.omega_powers[((i as i64) * (n - 1)).rem_euclid(n) as usize];
            for (a, pj) in acc.iter_mut().zip(p) {
                *a += c * pj;
            }
        }
        CycElement {
            field: self.field.clone(),
            coeffs: acc,
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm modulo Φ_N.
    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Singular("inverse of zero in Q(ω)".into()));
        }
        let mut r0 = self.field.modulus.clone();
        let mut r1 = trim(self.coeffs.clone());
        let mut s0: Vec<BigRational> = Vec::new();
        let mut s1 = vec![BigRational::one()];
        while !r1.is_empty() {
            let (q, r) = poly_divrem(&r0, &r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            s0 = std::mem::replace(&mut s1, s);
        }
        // Φ_N is irreducible, so the gcd is a nonzero constant.
        debug_assert_eq!(r0.len(), 1);
        let c = r0[0].clone();
        let inv: Vec<BigRational> = s0.into_iter().map(|x| x / &c).collect();
        Ok(CycElement::from_coeffs(&self.field, inv))
    }

    /// Substitutes ω = exp(2πi/N). The absolute error is on the order of
    /// Σ|c_i| times machine epsilon.
    pub fn evaluate_numeric(&self) -> Complex64 {
        let n = self.field.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let (s, co) = (2.0 * PI * i as f64 / n).sin_cos();
                Complex64::new(co, s) * c.to_f64().unwrap_or(f64::NAN)
            })
            .sum()
    }

    fn assert_same_field(&self, other: &Self) {
        assert_eq!(
            self.field.order, other.field.order,
            "mixing elements of different cyclotomic fields"
        );
    }
}

impl PartialEq for CycElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.coeffs == other.coeffs
    }
}

impl Eq for CycElement {}

impl fmt::Debug for CycElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycElement(N={}, ", self.field.order)?;
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            if !first {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", c.abs())?,
                1 => write!(f, "{}·ω", c.abs())?,
                _ => write!(f, "{}·ω^{}", c.abs(), i)?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        f.write_str(")")
    }
}

impl<'a> Add<&'a CycElement> for &'a CycElement {
    type Output = CycElement;

    fn add(self, rhs: &CycElement) -> CycElement {
        self.assert_same_field(rhs);
        CycElement {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<'a> Sub<&'a CycElement> for &'a CycElement {
    type Output = CycElement;

    fn sub(self, rhs: &CycElement) -> CycElement {
        self.assert_same_field(rhs);
        CycElement {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl<'a> Mul<&'a CycElement> for &'a CycElement {
    type Output = CycElement;

    fn mul(self, rhs: &CycElement) -> CycElement {
        self.assert_same_field(rhs);
        let prod = poly_mul(&self.coeffs, &rhs.coeffs);
        CycElement::from_coeffs(&self.field, prod)
    }
}

impl Neg for &CycElement {
    type Output = CycElement;

    fn neg(self) -> CycElement {
        CycElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, bj) in b.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let zero = BigRational::zero();
    let out = (0..n)
        .map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero))
        .collect();
    trim(out)
}

/// Division with remainder; `den` must be trimmed and nonempty.
fn poly_divrem(num: &[BigRational], den: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = trim(num.to_vec());
    let dn = den.len() - 1;
    if rem.len() < den.len() {
        return (Vec::new(), rem);
    }
    let lead = &den[dn];
    let mut quot = vec![BigRational::zero(); rem.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + dn] / lead;
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    rem.truncate(dn);
    (trim(quot), trim(rem))
}

/// Number of terms in the state sum of `knot` at order `n`, by the closed
/// lattice-point formulas.
pub(crate) fn term_count_formula(knot: KnotId, n: u64) -> u64 {
    match knot {
        KnotId::FourOne => n,
        KnotId::FiveTwo => n * (n + 1) / 2,
        KnotId::SixOne => n * (n + 1) * (n + 2) / 6,
    }
}

/// The table (ω)_k = ∏_{j=1..k} (1 − ω^j), k = 0..N−1.
pub fn exact_pochhammer(field: &Arc<CyclotomicField>) -> Vec<CycElement> {
    let n = field.order() as i64;
    let one = CycElement::one(field);
    let mut table = Vec::with_capacity(n as usize);
    let mut acc = one.clone();
    table.push(acc.clone());
    for j in 1..n {
        let factor = &one - &CycElement::omega_pow(field, j);
        acc = &acc * &factor;
        table.push(acc.clone());
    }
    table
}

/// ⟨knot⟩ at order N, summed exactly in Q(ω).
pub fn exact_invariant(knot: KnotId, n: u64) -> Result<CycElement> {
    exact_invariant_with_budget(knot, n, EXACT_TERM_BUDGET)
}

pub fn exact_invariant_with_budget(knot: KnotId, n: u64, budget: u64) -> Result<CycElement> {
    if n == 0 {
        return Err(Error::InvalidOrder(0));
    }
    let terms = term_count_formula(knot, n);
    if terms > budget {
        return Err(Error::ExactBudget { terms, budget });
    }
    let field = CyclotomicField::new(n)?;
    let poch = exact_pochhammer(&field);
    let poch_conj: Vec<CycElement> = poch.iter().map(CycElement::conj).collect();
    let ni = n as i64;
    let w = |e: i64| CycElement::omega_pow(&field, e);

    let mut total = CycElement::zero(&field);
    match knot {
        KnotId::FourOne => {
            for (p, pc) in poch.iter().zip(&poch_conj) {
                total = &total + &(p * pc);
            }
        }
        KnotId::FiveTwo => {
            let squares: Vec<CycElement> = poch.iter().map(|p| p * p).collect();
            for k in 0..ni {
                let inv_conj = poch_conj[k as usize].invert()?;
                let mut inner = CycElement::zero(&field);
                for l in k..ni {
                    inner = &inner + &(&squares[l as usize] * &w(-k * (l + 1)));
                }
                total = &total + &(&inner * &inv_conj);
            }
        }
        KnotId::SixOne => {
            let abs2: Vec<CycElement> = poch.iter().zip(&poch_conj).map(|(p, c)| p * c).collect();
            let inv: Vec<CycElement> =
                poch.iter().map(CycElement::invert).collect::<Result<_>>()?;
            let inv_conj: Vec<CycElement> = poch_conj
                .iter()
                .map(CycElement::invert)
                .collect::<Result<_>>()?;
            for k in 0..ni {
                for l in 0..(ni - k) {
                    let mut inner = CycElement::zero(&field);
                    for m in (k + l)..ni {
                        inner = &inner + &(&abs2[m as usize] * &w((m - k - l) * (m - k + 1)));
                    }
                    let weight = &inv[k as usize] * &inv_conj[l as usize];
                    total = &total + &(&inner * &weight);
                }
            }
        }
    }
    Ok(total)
}
