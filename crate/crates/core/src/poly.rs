//! Sparse multivariate polynomials, dense univariate polynomials and binary
//! forms over an exact field. Enough machinery to expand minors of a generic
//! matrix-space element and take gcds of binary forms.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::scalar::{Field, Scalar};

/// Polynomial in `nvars` commuting variables; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Scalar>,
}

impl MultiPoly {
    pub fn zero(field: Field, nvars: usize) -> Self {
        MultiPoly {
            field,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Scalar, nvars: usize) -> Self {
        let mut p = MultiPoly::zero(c.field(), nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    /// `Σ c_i t_i`.
    pub fn linear(field: Field, coeffs: &[Scalar]) -> Self {
        let n = coeffs.len();
        let mut p = MultiPoly::zero(field, n);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0; n];
                e[i] = 1;
                p.terms.insert(e, c.clone());
            }
        }
        p
    }

    pub fn var(field: Field, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = MultiPoly::zero(field, nvars);
        p.terms.insert(e, field.one());
        p
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Scalar)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    fn add_term(&mut self, e: Vec<u32>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(self.field, self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.mul(c2));
            }
        }
        out
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.nvars, "point has wrong arity");
        let mut acc = self.field.zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    term = term.mul(x);
                }
            }
            acc = acc.add(&term);
        }
        acc
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names: Vec<String> = (0..self.nvars).map(|i| format!("t{}", i + 1)).collect();
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| monomial_string(c, e, &names))
            .collect();
        write!(f, "{}", join_signed(&parts))
    }
}

fn monomial_string(c: &Scalar, e: &[u32], names: &[String]) -> String {
    let vars: Vec<String> = e
        .iter()
        .zip(names)
        .filter(|(k, _)| **k > 0)
        .map(|(k, n)| if *k == 1 { n.clone() } else { format!("{n}^{k}") })
        .collect();
    let coeff = c.to_string();
    if vars.is_empty() {
        coeff
    } else if c.is_one() {
        vars.join("*")
    } else if c.neg().is_one() && c.field() == Field::Rational {
        format!("-{}", vars.join("*"))
    } else {
        format!("{coeff}*{}", vars.join("*"))
    }
}

fn join_signed(parts: &[String]) -> String {
    let mut out = String::new();
    for (i, p) in parts.iter().enumerate() {
        if i == 0 {
            out.push_str(p);
        } else if let Some(rest) = p.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(p);
        }
    }
    out
}

/// Determinant of a square polynomial matrix by Laplace expansion along rows,
/// memoized on the set of remaining columns.
pub fn determinant(m: &[Vec<MultiPoly>]) -> MultiPoly {
    let n = m.len();
    assert!(n > 0 && n <= 63, "determinant size out of range");
    assert!(m.iter().all(|r| r.len() == n), "determinant of a non-square matrix");
    let mut memo: HashMap<u64, MultiPoly> = HashMap::new();
    laplace(m, 0, (1u64 << n) - 1, &mut memo)
}

fn laplace(m: &[Vec<MultiPoly>], row: usize, cols: u64, memo: &mut HashMap<u64, MultiPoly>) -> MultiPoly {
    let field = m[0][0].field();
    let nvars = m[0][0].nvars();
    if row == m.len() {
        return MultiPoly::constant(field.one(), nvars);
    }
    if let Some(p) = memo.get(&cols) {
        return p.clone();
    }
    let mut acc = MultiPoly::zero(field, nvars);
    let mut position = 0;
    for c in 0..m.len() {
        if cols & (1 << c) == 0 {
            continue;
        }
        let entry = &m[row][c];
        if !entry.is_zero() {
            let sub = laplace(m, row + 1, cols & !(1 << c), memo);
            if !sub.is_zero() {
                let term = entry.mul(&sub);
                acc = if position % 2 == 0 {
                    acc.add(&term)
                } else {
                    acc.sub(&term)
                };
            }
        }
        position += 1;
    }
    memo.insert(cols, acc.clone());
    acc
}

/// Dense univariate polynomial, coefficients from low to high degree, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl UniPoly {
    pub fn new(field: Field, mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        UniPoly { field, coeffs }
    }

    pub fn zero(field: Field) -> Self {
        UniPoly::new(field, Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, c| acc.mul(x).add(c))
    }

    pub fn monic(&self) -> UniPoly {
        match self.leading() {
            None => self.clone(),
            Some(l) => {
                let inv = l.inv().expect("leading coefficient is nonzero");
                UniPoly::new(self.field, self.coeffs.iter().map(|c| c.mul(&inv)).collect())
            }
        }
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = d.leading().unwrap().inv().unwrap();
        let mut r = self.coeffs.clone();
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let f = r.last().unwrap().mul(&lead_inv);
            for (i, c) in d.coeffs.iter().enumerate() {
                r[k + i] = r[k + i].sub(&f.mul(c));
            }
            r.pop();
            while r.last().is_some_and(Scalar::is_zero) {
                r.pop();
            }
        }
        UniPoly::new(self.field, r)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
}

/// Homogeneous polynomial in `(s, t)`; `coeffs[i]` multiplies `s^i t^(degree-i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm {
    field: Field,
    degree: usize,
    coeffs: Vec<Scalar>,
}

impl BinaryForm {
    /// Reads a homogeneous two-variable `MultiPoly` (variables `s = t1`, `t = t2`).
    /// Returns `None` for non-homogeneous input.
    pub fn from_multi(p: &MultiPoly) -> Option<BinaryForm> {
        assert_eq!(p.nvars(), 2, "binary form needs two variables");
        let degree = p.total_degree().unwrap_or(0) as usize;
        let mut coeffs = vec![p.field().zero(); degree + 1];
        for (e, c) in p.terms() {
            if (e[0] + e[1]) as usize != degree {
                return None;
            }
            coeffs[e[0] as usize] = c.clone();
        }
        Some(BinaryForm {
            field: p.field(),
            degree,
            coeffs,
        })
    }

    pub fn one(field: Field) -> BinaryForm {
        BinaryForm {
            field,
            degree: 0,
            coeffs: vec![field.one()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Multiplicity of the factor `t`, i.e. of the root `[1:0]`.
    fn t_multiplicity(&self) -> usize {
        let top = self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
        self.degree - top
    }

    /// `f(s, 1)`.
    pub fn dehomogenize(&self) -> UniPoly {
        UniPoly::new(self.field, self.coeffs.clone())
    }

    fn homogenize(u: &UniPoly, t_power: usize) -> BinaryForm {
        let du = u.degree().unwrap_or(0);
        let degree = du + t_power;
        let mut coeffs = vec![u.field.zero(); degree + 1];
        for (i, c) in u.coeffs().iter().enumerate() {
            coeffs[i] = c.clone();
        }
        BinaryForm {
            field: u.field,
            degree,
            coeffs,
        }
    }

    /// Gcd of nonzero binary forms, normalized so its dehomogenization is monic.
    /// Zero forms are ignored; the gcd of no nonzero forms is `None`.
    pub fn gcd_all<'a>(forms: impl IntoIterator<Item = &'a BinaryForm>) -> Option<BinaryForm> {
        let mut t_pow: Option<usize> = None;
        let mut g: Option<UniPoly> = None;
        for f in forms.into_iter().filter(|f| !f.is_zero()) {
            let a = f.t_multiplicity();
            t_pow = Some(t_pow.map_or(a, |x| x.min(a)));
            let u = f.dehomogenize();
            g = Some(match g {
                None => u.monic(),
                Some(prev) => prev.gcd(&u),
            });
        }
        Some(BinaryForm::homogenize(&g?, t_pow?))
    }

    pub fn eval(&self, s: &Scalar, t: &Scalar) -> Scalar {
        let mut acc = self.field.zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut term = c.clone();
            for _ in 0..i {
                term = term.mul(s);
            }
            for _ in 0..self.degree - i {
                term = term.mul(t);
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Roots `[s:t]` in the base field, `[1:0]` first, then `[r:1]` by increasing `r`
    /// (rationals) or residue (prime fields). Each root is listed once.
    pub fn roots(&self) -> Vec<(Scalar, Scalar)> {
        let f = self.field;
        let mut out = Vec::new();
        if self.is_zero() {
            return out;
        }
        if self.t_multiplicity() > 0 {
            out.push((f.one(), f.zero()));
        }
        let u = self.dehomogenize();
        let mut finite: Vec<Scalar> = match f {
            Field::Prime(p) => (0..p).map(|i| f.element(i)).filter(|x| u.eval(x).is_zero()).collect(),
            Field::Rational => rational_roots(&u),
        };
        if f == Field::Rational {
            finite.sort_by(|a, b| a.as_rational().unwrap().cmp(b.as_rational().unwrap()));
        }
        out.extend(finite.into_iter().map(|r| (r, f.one())));
        out
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["s".to_string(), "t".to_string()];
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| monomial_string(c, &[i as u32, (self.degree - i) as u32], &names))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", join_signed(&parts))
        }
    }
}

/// Distinct rational roots via the rational root theorem on the integer-scaled polynomial.
fn rational_roots(u: &UniPoly) -> Vec<Scalar> {
    let Some(deg) = u.degree() else {
        return Vec::new();
    };
    if deg == 0 {
        return Vec::new();
    }
    let lcm = u
        .coeffs()
        .iter()
        .map(|c| c.as_rational().unwrap().denom().clone())
        .fold(BigInt::one(), |a, b| a.lcm(&b));
    let mut ints: Vec<BigInt> = u
        .coeffs()
        .iter()
        .map(|c| (c.as_rational().unwrap() * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let mut roots = Vec::new();
    if ints[0].is_zero() {
        roots.push(Field::Rational.zero());
        while ints.first().is_some_and(Zero::is_zero) {
            ints.remove(0);
        }
    }
    if ints.len() > 1 {
        let lead = ints.last().unwrap().abs();
        let constant = ints[0].abs();
        for p in divisors(&constant) {
            for q in divisors(&lead) {
                for sign in [1i32, -1] {
                    let r = BigRational::new(BigInt::from(sign) * p.clone(), q.clone());
                    let x = Scalar::Rational(r);
                    if !roots.contains(&x) && u.eval(&x).is_zero() {
                        roots.push(x);
                    }
                }
            }
        }
    }
    roots
}

/// Positive divisors by trial division. Cofactors left after trial division up to
/// 10^6 are treated as prime, which is exact for inputs below 10^12.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut rest = n.clone();
    let mut d = 2u64;
    while d <= 1_000_000 && BigInt::from(d) * BigInt::from(d) <= rest {
        let bd = BigInt::from(d);
        let mut k = 0;
        while (&rest % &bd).is_zero() {
            rest /= &bd;
            k += 1;
        }
        if k > 0 {
            primes.push((bd, k));
        }
        d += 1;
    }
    if rest > BigInt::one() {
        primes.push((rest, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, k) in primes {
        let mut next = Vec::new();
        for dv in &divs {
            let mut pow = BigInt::one();
            for _ in 0..=k {
                next.push(dv * &pow);
                pow *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs.dedup();
    if divs.len() == 1 && n.is_zero() {
        return Vec::new();
    }
    divs
}
