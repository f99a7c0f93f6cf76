use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;
use std::hash::Hash;

use num_traits::Zero;

use crate::exactlinalg::{Elem, ExactMatrix, Ring};

use super::{ComplexError, GradedComplex, Grading};

/// Assembles a complex from named generators and differential entries.
#[derive(Clone, Debug)]
pub struct ComplexBuilder<K> {
    ring: Ring,
    modulus: Option<i64>,
    window: Option<(i64, i64)>,
    keys: BTreeMap<i64, Vec<K>>,
    index: HashMap<K, (i64, usize)>,
    entries: Vec<(K, K, Elem)>,
}

impl<K: Clone + Eq + Hash + Debug> ComplexBuilder<K> {
    /// Integer grading; the window is the span of the generators unless set.
    pub fn integer(ring: Ring) -> Self {
        ComplexBuilder { ring, modulus: None, window: None, keys: BTreeMap::new(), index: HashMap::new(), entries: Vec::new() }
    }

    pub fn cyclic(ring: Ring, modulus: i64) -> Self {
        ComplexBuilder { modulus: Some(modulus), ..Self::integer(ring) }
    }

    pub fn window(mut self, lo: i64, hi: i64) -> Self {
        self.window = Some((lo, hi));
        self
    }

    fn norm(&self, k: i64) -> i64 {
        self.modulus.map_or(k, |m| k.rem_euclid(m))
    }

    pub fn add_generator(&mut self, key: K, degree: i64) -> Result<(), ComplexError> {
        if self.index.contains_key(&key) {
            return Err(ComplexError::DuplicateGenerator(format!("{:?}", key)));
        }
        let k = self.norm(degree);
        let slot = self.keys.entry(k).or_default();
        self.index.insert(key.clone(), (k, slot.len()));
        slot.push(key);
        Ok(())
    }

    pub fn contains(&self, key: &K) -> bool {
        self.index.contains_key(key)
    }

    pub fn degree_of(&self, key: &K) -> Option<i64> {
        self.index.get(key).map(|p| p.0)
    }

    /// Adds `coef` to the coefficient of `target` in d(`source`).
    pub fn add_entry(&mut self, source: &K, target: &K, coef: Elem) -> Result<(), ComplexError> {
        let s = *self.index.get(source).ok_or_else(|| ComplexError::UnknownGenerator(format!("{:?}", source)))?;
        let t = *self.index.get(target).ok_or_else(|| ComplexError::UnknownGenerator(format!("{:?}", target)))?;
        if self.norm(s.0 - 1) != t.0 {
            return Err(ComplexError::Shape(format!(
                "entry {:?} -> {:?} goes from degree {} to {}",
                source, target, s.0, t.0
            )));
        }
        if !coef.is_zero() {
            self.entries.push((source.clone(), target.clone(), coef));
        }
        Ok(())
    }

    pub fn build(self) -> Result<KeyedComplex<K>, ComplexError> {
        let ring = self.ring;
        let grading = match self.modulus {
            Some(modulus) => Grading::Cyclic { modulus },
            None => {
                let (lo, hi) = match self.window {
                    Some(w) => w,
                    None => {
                        let lo = self.keys.keys().next().copied().unwrap_or(0);
                        let hi = self.keys.keys().next_back().copied().unwrap_or(0);
                        (lo, hi)
                    }
                };
                if let Some((&k, _)) = self.keys.iter().find(|(k, v)| !v.is_empty() && (**k < lo || **k > hi)) {
                    return Err(ComplexError::Shape(format!("generator in degree {} outside [{}, {}]", k, lo, hi)));
                }
                Grading::Integer { lo, hi }
            }
        };
        let rank = |k: i64| self.keys.get(&grading.normalize(k)).map_or(0, |v| v.len());
        let mut diffs: BTreeMap<i64, ExactMatrix> =
            grading.degrees().into_iter().map(|k| (k, ExactMatrix::zeros(ring, rank(k - 1), rank(k)))).collect();
        for (s, t, c) in &self.entries {
            let (ks, is) = self.index[s];
            let (_, it) = self.index[t];
            let m = diffs.get_mut(&ks).unwrap();
            let cur = m.get(it, is).clone();
            m.set(it, is, ring.add(&cur, &ring.normalize(c.clone())));
        }
        let ranks = grading.degrees().into_iter().map(rank).collect();
        let complex = GradedComplex::new(ring, grading, ranks, diffs.into_values().collect())?;
        Ok(KeyedComplex { complex, keys: self.keys, index: self.index })
    }
}

/// A complex together with the names of its basis elements.
#[derive(Clone, Debug)]
pub struct KeyedComplex<K> {
    pub complex: GradedComplex,
    keys: BTreeMap<i64, Vec<K>>,
    index: HashMap<K, (i64, usize)>,
}

impl<K: Clone + Eq + Hash + Debug> KeyedComplex<K> {
    pub fn keys(&self, k: i64) -> &[K] {
        let k = self.complex.grading().normalize(k);
        self.keys.get(&k).map_or(&[], |v| v.as_slice())
    }

    /// (degree, index) of a generator.
    pub fn position(&self, key: &K) -> Option<(i64, usize)> {
        self.index.get(key).copied()
    }

    /// Coordinate vector in degree k of a combination of generators.
    pub fn vector(&self, k: i64, terms: &[(K, Elem)]) -> Result<Vec<Elem>, ComplexError> {
        let ring = self.complex.ring();
        let k = self.complex.grading().normalize(k);
        let mut v = vec![Elem::zero(); self.complex.rank(k)];
        for (key, c) in terms {
            let (d, i) = self.position(key).ok_or_else(|| ComplexError::UnknownGenerator(format!("{:?}", key)))?;
            if d != k {
                return Err(ComplexError::Shape(format!("{:?} has degree {}, not {}", key, d, k)));
            }
            v[i] = ring.add(&v[i], c);
        }
        Ok(v)
    }

    /// Nonzero terms of a coordinate vector in degree k.
    pub fn describe(&self, k: i64, v: &[Elem]) -> Vec<(K, Elem)> {
        self.keys(k).iter().zip(v).filter(|(_, c)| !c.is_zero()).map(|(key, c)| (key.clone(), c.clone())).collect()
    }
}
