//! Exact multivariate polynomial arithmetic over the rationals, with the
//! Dunkl operators `T_j`, their composites `T^mu`, and the Dunkl Laplacian
//! for the sign-flip group.
//!
//! For Z2^d the operator on a function f is
//!
//! ```text
//! T_j f(x) = d/dx_j f(x) + k_j * (f(x) - f(sigma_j x)) / x_j,
//! ```
//!
//! where `sigma_j` flips the sign of coordinate j. On a monomial x^a the
//! difference part vanishes for even `a_j` and contributes `2 k_j x^{a - e_j}`
//! for odd `a_j`, so the division by `x_j` is exact term by term and the whole
//! operator stays inside rational polynomial arithmetic.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{DunklError, Result};

/// Total-degree cap; operations reject polynomials beyond it.
pub const DEGREE_CAP: usize = 64;

/// Exact multiplicities, parallel to a float `GroupConfig`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalK {
    values: Vec<BigRational>,
}

impl RationalK {
    pub fn new(values: Vec<BigRational>) -> Result<Self> {
        if values.is_empty() {
            return Err(DunklError::InvalidArgument(
                "at least one multiplicity is required".into(),
            ));
        }
        if values.iter().any(|k| k.is_negative()) {
            return Err(DunklError::InvalidArgument(
                "multiplicities must be nonnegative".into(),
            ));
        }
        Ok(RationalK { values })
    }

    /// Convenience constructor from integer pairs `p/q`.
    pub fn from_pairs(pairs: &[(i64, i64)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|&(p, q)| BigRational::new(BigInt::from(p), BigInt::from(q)))
                .collect(),
        )
    }

    /// Exact conversion of float multiplicities (every finite f64 is a
    /// dyadic rational), bridging a `GroupConfig` into the exact layer.
    pub fn from_floats(ks: &[f64]) -> Result<Self> {
        let values = ks
            .iter()
            .map(|&k| {
                BigRational::from_float(k).ok_or_else(|| {
                    DunklError::InvalidArgument(format!("non-finite multiplicity {k}"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(values)
    }

    pub fn dimension(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn to_floats(&self) -> Vec<f64> {
        self.values.iter().map(rational_to_f64).collect()
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are stored in a BTreeMap keyed by the exponent multi-index, so the
/// representation is canonical: no zero coefficients, deterministic term
/// order.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    dimension: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl MultiPoly {
    pub fn zero(dimension: usize) -> Self {
        MultiPoly {
            dimension,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dimension: usize, c: BigRational) -> Self {
        let mut p = Self::zero(dimension);
        if !c.is_zero() {
            p.terms.insert(vec![0; dimension], c);
        }
        p
    }

    pub fn one(dimension: usize) -> Self {
        Self::constant(dimension, BigRational::one())
    }

    /// The monomial `c * x^exponents`.
    pub fn monomial(dimension: usize, exponents: Vec<u32>, c: BigRational) -> Self {
        assert_eq!(exponents.len(), dimension);
        let mut p = Self::zero(dimension);
        if !c.is_zero() {
            p.terms.insert(exponents, c);
        }
        p
    }

    /// The coordinate variable `x_j` (0-based index).
    pub fn variable(dimension: usize, j: usize) -> Self {
        assert!(j < dimension);
        let mut e = vec![0; dimension];
        e[j] = 1;
        Self::monomial(dimension, e, BigRational::one())
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigRational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&a| a as usize).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn coefficient(&self, exponents: &[u32]) -> BigRational {
        self.terms.get(exponents).cloned().unwrap_or_else(BigRational::zero)
    }

    fn insert(&mut self, e: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.dimension, other.dimension);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            dimension: self.dimension,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(self.dimension);
        }
        MultiPoly {
            dimension: self.dimension,
            terms: self
                .terms
                .iter()
                .map(|(e, coeff)| (e.clone(), coeff * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        assert_eq!(self.dimension, other.dimension);
        let degree = self.total_degree() + other.total_degree();
        if !self.is_zero() && !other.is_zero() && degree > DEGREE_CAP {
            return Err(DunklError::DegreeCap {
                degree,
                cap: DEGREE_CAP,
            });
        }
        let mut out = Self::zero(self.dimension);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Result<MultiPoly> {
        let mut out = Self::one(self.dimension);
        for _ in 0..n {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Plain partial derivative in coordinate `j` (0-based).
    pub fn partial_derivative(&self, j: usize) -> MultiPoly {
        assert!(j < self.dimension);
        let mut out = Self::zero(self.dimension);
        for (e, c) in &self.terms {
            if e[j] == 0 {
                continue;
            }
            let mut en = e.clone();
            en[j] -= 1;
            out.insert(en, c * BigRational::from(BigInt::from(e[j])));
        }
        out
    }

    /// Composition with the sign flip of coordinate `j`.
    pub fn reflect(&self, j: usize) -> MultiPoly {
        assert!(j < self.dimension);
        MultiPoly {
            dimension: self.dimension,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let c = if e[j] % 2 == 1 { -c.clone() } else { c.clone() };
                    (e.clone(), c)
                })
                .collect(),
        }
    }

    /// Exact evaluation bridged to floating point at the end of each term.
    pub fn eval(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dimension);
        let mut sum = 0.0;
        let mut comp = 0.0;
        for (e, c) in &self.terms {
            let mut term = rational_to_f64(c);
            for (xi, &ai) in x.iter().zip(e) {
                term *= xi.powi(ai as i32);
            }
            let y = term - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        sum
    }

    /// Evaluation at a complex point.
    pub fn eval_complex(&self, z: &[Complex64]) -> Complex64 {
        assert_eq!(z.len(), self.dimension);
        let mut sum = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut term = Complex64::new(rational_to_f64(c), 0.0);
            for (zi, &ai) in z.iter().zip(e) {
                term *= zi.powu(ai);
            }
            sum += term;
        }
        sum
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl MultiPoly {
    /// Render with a chosen variable letter (`x` for points, `T` for
    /// operator letters, `z` for spectral variables).
    pub fn to_string_with_var(&self, prefix: char) -> String {
        use fmt::Write;
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        let mut first = true;
        for (e, c) in &self.terms {
            let magnitude = c.abs();
            if first {
                first = false;
                if c.is_negative() {
                    out.push('-');
                }
            } else if c.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let _ = write!(out, "{magnitude}");
            for (j, &a) in e.iter().enumerate() {
                if a == 1 {
                    let _ = write!(out, "*{prefix}{}", j + 1);
                } else if a > 1 {
                    let _ = write!(out, "*{prefix}{}^{}", j + 1, a);
                }
            }
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_with_var('x'))
    }
}

fn check_cap(p: &MultiPoly) -> Result<()> {
    let degree = p.total_degree();
    if degree > DEGREE_CAP {
        return Err(DunklError::DegreeCap {
            degree,
            cap: DEGREE_CAP,
        });
    }
    Ok(())
}

/// The Dunkl operator `T_j` applied exactly to a polynomial (j is 0-based).
///
/// Lowers the `x_j`-degree of every monomial by exactly one; constants are
/// annihilated.
pub fn dunkl_apply(kq: &RationalK, j: usize, p: &MultiPoly) -> Result<MultiPoly> {
    if j >= p.dimension() {
        return Err(DunklError::InvalidArgument(format!(
            "coordinate index {} out of range for dimension {}",
            j + 1,
            p.dimension()
        )));
    }
    if kq.dimension() != p.dimension() {
        return Err(DunklError::InvalidArgument(
            "multiplicity vector and polynomial dimensions differ".into(),
        ));
    }
    check_cap(p)?;
    let kj = &kq.values()[j];
    let two_kj = kj + kj;
    let mut out = MultiPoly::zero(p.dimension());
    for (e, c) in p.terms() {
        if e[j] == 0 {
            continue;
        }
        let mut en = e.to_vec();
        en[j] -= 1;
        // derivative part a_j, reflection part 2 k_j on odd a_j
        let mut factor = BigRational::from(BigInt::from(e[j]));
        if e[j] % 2 == 1 {
            factor += &two_kj;
        }
        out.insert(en, c * factor);
    }
    Ok(out)
}

/// The composite `T^mu = T_1^{mu_1} o ... o T_d^{mu_d}` applied in the fixed
/// coordinate order. The individual operators commute on polynomials, which
/// the tests assert on random inputs.
pub fn dunkl_compose(kq: &RationalK, mu: &[u32], p: &MultiPoly) -> Result<MultiPoly> {
    if mu.len() != p.dimension() {
        return Err(DunklError::InvalidArgument(
            "multi-index and polynomial dimensions differ".into(),
        ));
    }
    let mut out = p.clone();
    for (j, &m) in mu.iter().enumerate() {
        for _ in 0..m {
            out = dunkl_apply(kq, j, &out)?;
            if out.is_zero() {
                return Ok(out);
            }
        }
    }
    Ok(out)
}

/// The Dunkl Laplacian `sum_j T_j^2`; drops homogeneous degree by two.
pub fn dunkl_laplacian(kq: &RationalK, p: &MultiPoly) -> Result<MultiPoly> {
    let mut out = MultiPoly::zero(p.dimension());
    for j in 0..p.dimension() {
        let tj = dunkl_apply(kq, j, p)?;
        let tjj = dunkl_apply(kq, j, &tj)?;
        out = out.add(&tjj);
    }
    Ok(out)
}

/// Horner-free exact-to-float evaluation; alias kept close to the callers
/// that think of evaluation as an operation on the polynomial module.
pub fn eval_poly(p: &MultiPoly, x: &[f64]) -> f64 {
    p.eval(x)
}

// ---------------------------------------------------------------------------
// Polynomial literal parsing
// ---------------------------------------------------------------------------

/// Parse a polynomial literal such as `3/2 * x1^2 x2 - x2^3 + 4`.
///
/// Terms are separated by `+`/`-`; a term is an optional exact rational
/// coefficient (integer, `p/q`, or decimal) followed by variable factors
/// `x<i>` or `x<i>^<a>`, with `*` optional. `var_prefix` selects the variable
/// letter (`'x'` for polynomials, `'T'` for operator symbols); a bare prefix
/// letter with no index is accepted as coordinate 1.
pub fn parse_poly(text: &str, dimension: usize, var_prefix: char) -> Result<MultiPoly> {
    let mut parser = Parser {
        chars: text.chars().collect(),
        pos: 0,
        dimension,
        prefix_lower: var_prefix.to_ascii_lowercase(),
    };
    let poly = parser.parse_sum()?;
    parser.skip_ws();
    if parser.pos != parser.chars.len() {
        return Err(DunklError::Parse(format!(
            "unexpected trailing input at offset {}",
            parser.pos
        )));
    }
    Ok(poly)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    dimension: usize,
    prefix_lower: char,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn parse_sum(&mut self) -> Result<MultiPoly> {
        let mut out = MultiPoly::zero(self.dimension);
        let mut sign = BigRational::one();
        self.skip_ws();
        if self.peek() == Some('-') {
            self.bump();
            sign = -sign;
        } else if self.peek() == Some('+') {
            self.bump();
        }
        loop {
            let term = self.parse_term()?;
            out = out.add(&term.scale(&sign));
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.bump();
                    sign = BigRational::one();
                }
                Some('-') => {
                    self.bump();
                    sign = -BigRational::one();
                }
                _ => break,
            }
        }
        Ok(out)
    }

    fn parse_term(&mut self) -> Result<MultiPoly> {
        self.skip_ws();
        let mut coeff = BigRational::one();
        let mut exponents = vec![0u32; self.dimension];
        let mut saw_factor = false;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    coeff *= self.parse_rational()?;
                    saw_factor = true;
                }
                Some(c) if c.to_ascii_lowercase() == self.prefix_lower => {
                    self.bump();
                    let index = self.parse_optional_index()?;
                    if index == 0 || index > self.dimension {
                        return Err(DunklError::Parse(format!(
                            "variable index {index} out of range 1..={}",
                            self.dimension
                        )));
                    }
                    let exp = self.parse_optional_power()?;
                    exponents[index - 1] = exponents[index - 1]
                        .checked_add(exp)
                        .ok_or_else(|| DunklError::Parse("exponent overflow".into()))?;
                    saw_factor = true;
                }
                Some('*') => {
                    self.bump();
                }
                _ => break,
            }
        }
        if !saw_factor {
            return Err(DunklError::Parse(format!(
                "expected a term at offset {}",
                self.pos
            )));
        }
        Ok(MultiPoly::monomial(self.dimension, exponents, coeff))
    }

    fn parse_optional_index(&mut self) -> Result<usize> {
        let mut digits = String::new();
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            digits.push(self.bump().unwrap());
        }
        if digits.is_empty() {
            // bare variable letter means coordinate 1
            Ok(1)
        } else {
            digits
                .parse::<usize>()
                .map_err(|e| DunklError::Parse(format!("bad variable index: {e}")))
        }
    }

    fn parse_optional_power(&mut self) -> Result<u32> {
        self.skip_ws();
        if self.peek() == Some('^') {
            self.bump();
            self.skip_ws();
            let mut digits = String::new();
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                digits.push(self.bump().unwrap());
            }
            if digits.is_empty() {
                return Err(DunklError::Parse("expected exponent after '^'".into()));
            }
            digits
                .parse::<u32>()
                .map_err(|e| DunklError::Parse(format!("bad exponent: {e}")))
        } else {
            Ok(1)
        }
    }

    fn parse_rational(&mut self) -> Result<BigRational> {
        let mut digits = String::new();
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            digits.push(self.bump().unwrap());
        }
        let mut value: BigRational = digits
            .parse::<BigInt>()
            .map(BigRational::from)
            .map_err(|e| DunklError::Parse(format!("bad integer: {e}")))?;
        match self.peek() {
            Some('/') => {
                self.bump();
                let mut denom = String::new();
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    denom.push(self.bump().unwrap());
                }
                let d: BigInt = denom
                    .parse()
                    .map_err(|e| DunklError::Parse(format!("bad denominator: {e}")))?;
                if d.is_zero() {
                    return Err(DunklError::Parse("zero denominator".into()));
                }
                value /= BigRational::from(d);
            }
            Some('.') => {
                self.bump();
                let mut frac = String::new();
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    frac.push(self.bump().unwrap());
                }
                if frac.is_empty() {
                    return Err(DunklError::Parse("expected digits after '.'".into()));
                }
                let numer: BigInt = frac
                    .parse()
                    .map_err(|e| DunklError::Parse(format!("bad decimal: {e}")))?;
                let denom = BigInt::from(10u32).pow(frac.len() as u32);
                value += BigRational::new(numer, denom);
            }
            _ => {}
        }
        Ok(value)
    }
}
