//! Seeded random expressions for randomized identity checks.

use num::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use std::collections::BTreeMap;

use crate::expr::{Component, Expr, FieldId, FieldSystem, JetVar, MultiIndex, Parity, Rational};
use crate::jetcalc::GeneralizedVectorField;

#[derive(Clone, Debug)]
pub struct SampleShape {
    pub max_order: usize,
    pub max_degree: usize,
    pub max_terms: usize,
    /// Coefficients are drawn from `-coefficient_range..=coefficient_range`
    /// over denominators `1..=3`.
    pub coefficient_range: i64,
    /// Probability that a factor is a base coordinate `x^λ`.
    pub base_weight: f64,
}

impl Default for SampleShape {
    fn default() -> Self {
        SampleShape {
            max_order: 2,
            max_degree: 3,
            max_terms: 4,
            coefficient_range: 4,
            base_weight: 0.0,
        }
    }
}

pub struct Sampler<'a> {
    system: &'a FieldSystem,
    fields: Vec<FieldId>,
    pub shape: SampleShape,
    rng: ChaCha8Rng,
}

impl<'a> Sampler<'a> {
    pub fn new(system: &'a FieldSystem, seed: u64) -> Self {
        Sampler {
            system,
            fields: system.fields().map(|(id, _)| id).collect(),
            shape: SampleShape::default(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Restricts sampled variables to the given fields.
    pub fn with_fields(mut self, fields: &[FieldId]) -> Self {
        self.fields = fields.to_vec();
        self
    }

    pub fn with_shape(mut self, shape: SampleShape) -> Self {
        self.shape = shape;
        self
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn coefficient(&mut self) -> Rational {
        let r = self.shape.coefficient_range;
        loop {
            let n = self.rng.gen_range(-r..=r);
            if n != 0 {
                let d = self.rng.gen_range(1..=3i64);
                return Rational::new(BigInt::from(n), BigInt::from(d));
            }
        }
    }

    pub fn multi_index(&mut self, max_order: usize) -> MultiIndex {
        let n = self.system.base_dim();
        let order = self.rng.gen_range(0..=max_order);
        let entries: Vec<usize> = (0..order).map(|_| self.rng.gen_range(0..n)).collect();
        MultiIndex::from_entries(n, &entries).expect("directions in range")
    }

    pub fn component(&mut self) -> Component {
        let field = self.fields[self.rng.gen_range(0..self.fields.len())];
        let size = self.system.field(field).fiber_size() as u32;
        Component {
            field,
            fiber: self.rng.gen_range(0..size),
        }
    }

    pub fn jet_var(&mut self) -> JetVar {
        let c = self.component();
        let mi = self.multi_index(self.shape.max_order);
        self.system.jet_var(c, mi).expect("sampled variable is valid")
    }

    pub fn monomial(&mut self) -> Expr {
        let degree = self.rng.gen_range(0..=self.shape.max_degree);
        let mut e = Expr::constant(self.coefficient());
        for _ in 0..degree {
            let factor = if self.rng.gen_bool(self.shape.base_weight) {
                Expr::base_coordinate(self.rng.gen_range(0..self.system.base_dim()))
            } else {
                Expr::var(self.jet_var())
            };
            e = &e * &factor;
        }
        e
    }

    /// A sum of random monomials; may be zero.
    pub fn expr(&mut self) -> Expr {
        let terms = self.rng.gen_range(1..=self.shape.max_terms);
        let mut e = Expr::zero();
        for _ in 0..terms {
            e += self.monomial();
        }
        e
    }

    /// A random expression of the requested parity (possibly zero).
    pub fn expr_with_parity(&mut self, parity: Parity) -> Expr {
        let terms = self.rng.gen_range(1..=self.shape.max_terms);
        let mut e = Expr::zero();
        let mut attempts = 0;
        while e.len() < terms && attempts < 20 * terms {
            attempts += 1;
            let m = self.monomial();
            if m.parity() == Some(parity) && !m.is_zero() {
                e += m;
            }
        }
        e
    }

    pub fn gen_bool(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn gen_range(&mut self, range: std::ops::Range<usize>) -> usize {
        self.rng.gen_range(range)
    }

    /// A random generalized vector field of derivation parity `parity` on
    /// the given components. Components may come out zero.
    pub fn vector_field(&mut self, components: &[Component], parity: Parity) -> GeneralizedVectorField {
        let mut map = BTreeMap::new();
        for &c in components {
            let p = parity + self.system.component_parity(c);
            map.insert(c, self.expr_with_parity(p));
        }
        GeneralizedVectorField::with_parity(self.system, map, parity).expect("uniform parity by construction")
    }
}
