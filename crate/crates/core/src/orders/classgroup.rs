use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::form::{reduced_forms, Form};
use super::order::QuadOrder;
use crate::config::Bounds;
use crate::error::{Error, Result};
use crate::ntheory;

/// Pic of an imaginary quadratic order, realised on reduced primitive forms.
/// Representatives are sorted, so index 0 is the principal class.
#[derive(Debug, Clone)]
pub struct ClassGroup {
    order: QuadOrder,
    reps: Vec<Form>,
    index: HashMap<Form, usize>,
    structure: Vec<u64>,
}

fn cache() -> &'static Mutex<HashMap<i64, Arc<ClassGroup>>> {
    static CACHE: OnceLock<Mutex<HashMap<i64, Arc<ClassGroup>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn class_group(order: &QuadOrder, bounds: &Bounds) -> Result<Arc<ClassGroup>> {
    let d = order.disc();
    if d.unsigned_abs() > bounds.discriminant {
        return Err(Error::bound("discriminant", d.unsigned_abs(), bounds.discriminant));
    }
    if let Some(g) = cache().lock().unwrap().get(&d) {
        return Ok(g.clone());
    }
    let g = Arc::new(ClassGroup::build(*order));
    cache().lock().unwrap().insert(d, g.clone());
    Ok(g)
}

impl ClassGroup {
    fn build(order: QuadOrder) -> Self {
        let reps = reduced_forms(order.disc());
        let index = reps.iter().enumerate().map(|(i, f)| (*f, i)).collect();
        let mut g = ClassGroup { order, reps, index, structure: Vec::new() };
        g.structure = g.compute_structure();
        g
    }

    fn compute_structure(&self) -> Vec<u64> {
        let h = self.h();
        let orders: Vec<u64> = (0..self.reps.len()).map(|i| self.element_order(i)).collect();
        let mut factors: Vec<u64> = Vec::new();
        for (r, v) in ntheory::factor(h) {
            // counts[k] = log_r #{x : x^{r^k} = 1}
            let mut counts = vec![0u32];
            for k in 1..=v {
                let rk = r.pow(k);
                let c = orders.iter().filter(|&&o| rk % o == 0).count() as u128;
                counts.push(ntheory::valuation(c, r as u128));
            }
            // number of cyclic factors of exponent ≥ k is counts[k] − counts[k−1]
            let mut exps: Vec<u32> = Vec::new();
            for k in 1..=v as usize {
                let n_ge = counts[k] - counts[k - 1];
                let n_ge_next = if k < v as usize { counts[k + 1] - counts[k] } else { 0 };
                for _ in 0..(n_ge - n_ge_next) {
                    exps.push(k as u32);
                }
            }
            exps.sort_unstable_by(|a, b| b.cmp(a));
            for (i, e) in exps.iter().enumerate() {
                if factors.len() <= i {
                    factors.push(1);
                }
                factors[i] *= r.pow(*e);
            }
        }
        factors.sort_unstable();
        factors
    }

    pub fn order(&self) -> &QuadOrder {
        &self.order
    }

    pub fn h(&self) -> u64 {
        self.reps.len() as u64
    }

    pub fn reps(&self) -> &[Form] {
        &self.reps
    }

    /// Invariant factors d_1 | d_2 | … (empty for the trivial group).
    pub fn structure(&self) -> &[u64] {
        &self.structure
    }

    pub fn rep(&self, i: usize) -> Form {
        self.reps[i]
    }

    /// Class index of a primitive form of this discriminant.
    pub fn index_of(&self, f: &Form) -> usize {
        self.index[&f.reduce()]
    }

    pub fn compose(&self, i: usize, j: usize) -> usize {
        self.index_of(&self.reps[i].compose(&self.reps[j]))
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.index_of(&self.reps[i].conj())
    }

    pub fn element_order(&self, i: usize) -> u64 {
        let mut k = 1;
        let mut cur = i;
        while cur != 0 {
            cur = self.compose(cur, i);
            k += 1;
        }
        k
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cg(d: i64) -> Arc<ClassGroup> {
        class_group(&QuadOrder::from_disc(d).unwrap(), &Bounds::default()).unwrap()
    }

    #[test]
    fn class_numbers() {
        assert_eq!(cg(-4).h(), 1);
        assert_eq!(cg(-15).h(), 2);
        assert_eq!(cg(-16).h(), 1);
        assert_eq!(cg(-23).h(), 3);
        assert_eq!(cg(-84).h(), 4);
        assert_eq!(cg(-84).structure(), &[2, 2]);
        assert_eq!(cg(-56).structure(), &[4]);
        assert_eq!(cg(-4).structure(), &[] as &[u64]);
    }

    #[test]
    fn bound_respected() {
        let o = QuadOrder::from_disc(-1_000_003).unwrap();
        assert!(class_group(&o, &Bounds::default()).unwrap_err().is_bound_violation());
    }
}
