use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num::{BigInt, One, Signed, Zero};

use super::{JetVar, Parity, Rational};

/// The variable part of a monomial: even jet variables with exponents, a
/// strictly increasing sequence of odd jet variables, and an optional
/// polynomial in the base coordinates `x^λ`.
///
/// The represented product is `x^base · Π even^k · odd_1 ⋯ odd_r` with the
/// odd factors in canonical order.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Monomial {
    even: Vec<(JetVar, u32)>,
    odd: Vec<JetVar>,
    base: Vec<u16>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn from_var(v: JetVar) -> Self {
        if v.is_odd() {
            Monomial {
                odd: vec![v],
                ..Default::default()
            }
        } else {
            Monomial {
                even: vec![(v, 1)],
                ..Default::default()
            }
        }
    }

    /// `x^exponents` (trailing zeros trimmed).
    pub fn from_base_exponents(exponents: &[u16]) -> Self {
        let mut base = exponents.to_vec();
        trim(&mut base);
        Monomial {
            base,
            ..Default::default()
        }
    }

    pub fn is_one(&self) -> bool {
        self.even.is_empty() && self.odd.is_empty() && self.base.is_empty()
    }

    pub fn even_part(&self) -> &[(JetVar, u32)] {
        &self.even
    }

    pub fn odd_part(&self) -> &[JetVar] {
        &self.odd
    }

    pub fn base_exponents(&self) -> &[u16] {
        &self.base
    }

    pub fn parity(&self) -> Parity {
        Parity::from_odd(self.odd.len() % 2 == 1)
    }

    pub fn degree(&self) -> u32 {
        self.even.iter().map(|(_, k)| *k).sum::<u32>()
            + self.odd.len() as u32
            + self.base.iter().map(|&k| k as u32).sum::<u32>()
    }

    /// Degree in jet variables only.
    pub fn jet_degree(&self) -> u32 {
        self.even.iter().map(|(_, k)| *k).sum::<u32>() + self.odd.len() as u32
    }

    pub fn variables(&self) -> impl Iterator<Item = &JetVar> {
        self.even.iter().map(|(v, _)| v).chain(self.odd.iter())
    }

    pub fn exponent_of(&self, v: &JetVar) -> u32 {
        if v.is_odd() {
            self.odd.binary_search(v).map_or(0, |_| 1)
        } else {
            self.even
                .binary_search_by(|(w, _)| w.cmp(v))
                .map_or(0, |i| self.even[i].1)
        }
    }

    /// Product of monomials; `None` if an odd variable repeats. The flag is
    /// the Koszul sign from merging the odd sequences.
    pub fn mul(&self, other: &Monomial) -> Option<(Monomial, bool)> {
        let mut odd = Vec::with_capacity(self.odd.len() + other.odd.len());
        let mut negate = false;
        let (mut i, mut j) = (0, 0);
        while i < self.odd.len() && j < other.odd.len() {
            match self.odd[i].cmp(&other.odd[j]) {
                Ordering::Less => {
                    odd.push(self.odd[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    // other.odd[j] moves left past the remaining factors of self.
                    if (self.odd.len() - i) % 2 == 1 {
                        negate = !negate;
                    }
                    odd.push(other.odd[j].clone());
                    j += 1;
                }
                Ordering::Equal => return None,
            }
        }
        odd.extend_from_slice(&self.odd[i..]);
        odd.extend_from_slice(&other.odd[j..]);

        let mut even = Vec::with_capacity(self.even.len() + other.even.len());
        let (mut i, mut j) = (0, 0);
        while i < self.even.len() && j < other.even.len() {
            match self.even[i].0.cmp(&other.even[j].0) {
                Ordering::Less => {
                    even.push(self.even[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    even.push(other.even[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    even.push((self.even[i].0.clone(), self.even[i].1 + other.even[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        even.extend_from_slice(&self.even[i..]);
        even.extend_from_slice(&other.even[j..]);

        let n = self.base.len().max(other.base.len());
        let mut base = vec![0u16; n];
        for (k, e) in self.base.iter().enumerate() {
            base[k] += e;
        }
        for (k, e) in other.base.iter().enumerate() {
            base[k] += e;
        }
        Some((Monomial { even, odd, base }, negate))
    }

    /// Graded left partial derivative `∂_v` of this monomial: the integer
    /// factor (exponent times sign) and the remaining monomial.
    pub fn left_partial(&self, v: &JetVar) -> Option<(i64, Monomial)> {
        if v.is_odd() {
            let pos = self.odd.binary_search(v).ok()?;
            let mut out = self.clone();
            out.odd.remove(pos);
            let sign = if pos % 2 == 0 { 1 } else { -1 };
            Some((sign, out))
        } else {
            let pos = self.even.binary_search_by(|(w, _)| w.cmp(v)).ok()?;
            let mut out = self.clone();
            let k = out.even[pos].1;
            if k == 1 {
                out.even.remove(pos);
            } else {
                out.even[pos].1 -= 1;
            }
            Some((k as i64, out))
        }
    }

    /// Left multiplication `v · m`; `None` if it vanishes. The flag is the
    /// sign from moving an odd `v` into canonical position.
    pub fn times_var(&self, v: &JetVar) -> Option<(Monomial, bool)> {
        let mut out = self.clone();
        if v.is_odd() {
            match out.odd.binary_search(v) {
                Ok(_) => None,
                Err(pos) => {
                    out.odd.insert(pos, v.clone());
                    Some((out, pos % 2 == 1))
                }
            }
        } else {
            match out.even.binary_search_by(|(w, _)| w.cmp(v)) {
                Ok(pos) => out.even[pos].1 += 1,
                Err(pos) => out.even.insert(pos, (v.clone(), 1)),
            }
            Some((out, false))
        }
    }

    /// `∂/∂x^λ` of the base-coordinate part.
    pub fn base_partial(&self, direction: usize) -> Option<(i64, Monomial)> {
        let k = *self.base.get(direction)?;
        if k == 0 {
            return None;
        }
        let mut out = self.clone();
        out.base[direction] -= 1;
        trim(&mut out.base);
        Some((k as i64, out))
    }

    /// Removes every jet variable satisfying `pred`, keeping their exponents.
    /// Returns (removed part, rest, sign) with `self = sign · removed · rest`.
    pub fn split_off(&self, pred: impl Fn(&JetVar) -> bool) -> (Monomial, Monomial, bool) {
        let mut taken = Monomial::default();
        let mut rest = Monomial {
            base: self.base.clone(),
            ..Default::default()
        };
        for (v, k) in &self.even {
            if pred(v) {
                taken.even.push((v.clone(), *k));
            } else {
                rest.even.push((v.clone(), *k));
            }
        }
        // Count transpositions needed to move the taken odd factors to the front.
        let mut negate = false;
        let mut rest_odd_seen = 0usize;
        for v in &self.odd {
            if pred(v) {
                if rest_odd_seen % 2 == 1 {
                    negate = !negate;
                }
                taken.odd.push(v.clone());
            } else {
                rest_odd_seen += 1;
                rest.odd.push(v.clone());
            }
        }
        (taken, rest, negate)
    }
}

fn trim(base: &mut Vec<u16>) {
    while base.last() == Some(&0) {
        base.pop();
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.even.cmp(&other.even))
            .then_with(|| self.odd.cmp(&other.odd))
            .then_with(|| self.base.cmp(&other.base))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in jet variables with exact rational coefficients, kept in
/// canonical form: monomials sorted, distinct and with nonzero coefficients.
/// Structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Expr {
    terms: BTreeMap<Monomial, Rational>,
}

impl Expr {
    pub fn zero() -> Self {
        Expr::default()
    }

    pub fn one() -> Self {
        Expr::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Expr::term(c, Monomial::one())
    }

    pub fn int(c: i64) -> Self {
        Expr::constant(Rational::from_integer(BigInt::from(c)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Expr::constant(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn var(v: JetVar) -> Self {
        Expr::term(Rational::one(), Monomial::from_var(v))
    }

    /// The base coordinate `x^λ` (zero-based direction).
    pub fn base_coordinate(direction: usize) -> Self {
        let mut exps = vec![0u16; direction + 1];
        exps[direction] = 1;
        Expr::term(Rational::one(), Monomial::from_base_exponents(&exps))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Expr { terms }
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut e = Expr::zero();
        for (m, c) in iter {
            e.add_term(m, c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored monomials.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// The constant term.
    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one())
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    /// Parity if all monomials agree; the zero expression is even.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(Monomial::parity);
        let first = it.next().unwrap_or(Parity::Even);
        it.all(|p| p == first).then_some(first)
    }

    pub fn variables(&self) -> BTreeSet<JetVar> {
        self.terms
            .keys()
            .flat_map(|m| m.variables().cloned())
            .collect()
    }

    /// Largest jet order among the variables; 0 for constants.
    pub fn jet_order(&self) -> usize {
        self.terms
            .keys()
            .flat_map(|m| m.variables().map(JetVar::order))
            .max()
            .unwrap_or(0)
    }

    pub fn has_base_dependence(&self) -> bool {
        self.terms.keys().any(|m| !m.base_exponents().is_empty())
    }

    /// Applies a derivation-like map monomial by monomial.
    pub fn map_monomials(&self, mut f: impl FnMut(&Monomial, &Rational, &mut Expr)) -> Expr {
        let mut out = Expr::zero();
        for (m, c) in &self.terms {
            f(m, c, &mut out);
        }
        out
    }

    /// Graded left partial derivative with respect to one jet variable.
    pub fn left_partial(&self, v: &JetVar) -> Expr {
        self.map_monomials(|m, c, out| {
            if let Some((k, rest)) = m.left_partial(v) {
                out.add_term(rest, c * Rational::from_integer(BigInt::from(k)));
            }
        })
    }

    /// `∂/∂x^λ` acting on the explicit base-coordinate dependence.
    pub fn base_partial(&self, direction: usize) -> Expr {
        self.map_monomials(|m, c, out| {
            if let Some((k, rest)) = m.base_partial(direction) {
                out.add_term(rest, c * Rational::from_integer(BigInt::from(k)));
            }
        })
    }

    /// Left multiplication by a single jet variable.
    pub fn times_var(&self, v: &JetVar) -> Expr {
        self.map_monomials(|m, c, out| {
            if let Some((prod, negate)) = m.times_var(v) {
                out.add_term(prod, if negate { -c } else { c.clone() });
            }
        })
    }

    /// Collects the coefficient of each distinct `pred`-part:
    /// `self = Σ key · coefficient`, where keys contain only variables
    /// satisfying `pred` and coefficients none.
    pub fn collect_by(&self, pred: impl Fn(&JetVar) -> bool) -> BTreeMap<Monomial, Expr> {
        let mut out: BTreeMap<Monomial, Expr> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (key, rest, negate) = m.split_off(&pred);
            let c = if negate { -c } else { c.clone() };
            out.entry(key).or_default().add_term(rest, c);
        }
        out.retain(|_, e| !e.is_zero());
        out
    }

    /// Substitutes expressions for jet variables. Variables without an entry
    /// are kept. Products are rebuilt in canonical odd order.
    pub fn substitute(&self, map: &impl Fn(&JetVar) -> Option<Expr>) -> Expr {
        let mut out = Expr::zero();
        for (m, c) in &self.terms {
            let mut acc = Expr::term(c.clone(), Monomial::from_base_exponents(m.base_exponents()));
            for (v, k) in m.even_part() {
                let factor = map(v).unwrap_or_else(|| Expr::var(v.clone()));
                for _ in 0..*k {
                    acc = &acc * &factor;
                }
            }
            for v in m.odd_part() {
                let factor = map(v).unwrap_or_else(|| Expr::var(v.clone()));
                acc = &acc * &factor;
            }
            out += &acc;
        }
        out
    }

    /// Largest absolute numerator/denominator bit length; cheap size metric.
    pub fn max_coefficient_bits(&self) -> u64 {
        self.terms
            .values()
            .map(|c| c.numer().abs().bits().max(c.denom().bits()))
            .max()
            .unwrap_or(0)
    }

    pub fn pow(&self, k: u32) -> Expr {
        let mut acc = Expr::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

impl AddAssign<&Expr> for Expr {
    fn add_assign(&mut self, rhs: &Expr) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl AddAssign<Expr> for Expr {
    fn add_assign(&mut self, rhs: Expr) {
        if self.terms.is_empty() {
            *self = rhs;
            return;
        }
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl SubAssign<&Expr> for Expr {
    fn sub_assign(&mut self, rhs: &Expr) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl SubAssign<Expr> for Expr {
    fn sub_assign(&mut self, rhs: Expr) {
        for (m, c) in rhs.terms {
            self.add_term(m, -c);
        }
    }
}

impl Add<&Expr> for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(mut self, rhs: Expr) -> Expr {
        self += rhs;
        self
    }
}

impl Sub<&Expr> for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(mut self, rhs: Expr) -> Expr {
        self -= &rhs;
        self
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(mut self) -> Expr {
        for c in self.terms.values_mut() {
            let v = std::mem::replace(c, Rational::zero());
            *c = -v;
        }
        self
    }
}

impl Mul<&Expr> for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        let mut out = Expr::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                if let Some((m, negate)) = ma.mul(mb) {
                    let c = ca * cb;
                    out.add_term(m, if negate { -c } else { c });
                }
            }
        }
        out
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        &self * &rhs
    }
}

impl Mul<&Rational> for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Rational) -> Expr {
        self.scale(rhs)
    }
}
