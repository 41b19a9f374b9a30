//! Enumeration of projective points over a finite field, normalized so the
//! first nonzero coordinate is 1.  Order is deterministic: leading-one
//! position ascending, trailing coordinates odometer-style in field order.

use crate::field::FiniteField;

pub struct ProjectivePoints<K> {
    elements: Vec<K>,
    one: K,
    ncoords: usize,
    lead: usize,
    digits: Vec<usize>,
    done: bool,
}

/// Points of ℙ^{ncoords-1}(K) as coordinate vectors of length `ncoords`.
pub fn points<K: FiniteField>(ctx: &K, ncoords: usize) -> ProjectivePoints<K> {
    assert!(ncoords >= 1);
    ProjectivePoints {
        elements: ctx.all_elements(),
        one: ctx.embed_i64(1),
        ncoords,
        lead: 0,
        digits: vec![0; ncoords - 1],
        done: false,
    }
}

pub fn count_points(order: u64, ncoords: usize) -> u64 {
    let mut total = 0u64;
    let mut pw = 1u64;
    for _ in 0..ncoords {
        total += pw;
        pw *= order;
    }
    total
}

impl<K: FiniteField> Iterator for ProjectivePoints<K> {
    type Item = Vec<K>;

    fn next(&mut self) -> Option<Vec<K>> {
        if self.done {
            return None;
        }
        let n = self.ncoords;
        let free = n - 1 - self.lead;
        let mut v = vec![K::zero(); n];
        v[self.lead] = self.one.clone();
        for (i, &d) in self.digits.iter().take(free).enumerate() {
            v[self.lead + 1 + i] = self.elements[d].clone();
        }
        // advance odometer over the free coordinates
        let mut i = free;
        loop {
            if i == 0 {
                self.lead += 1;
                self.digits.iter_mut().for_each(|d| *d = 0);
                if self.lead == n {
                    self.done = true;
                }
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < self.elements.len() {
                break;
            }
            self.digits[i] = 0;
        }
        Some(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Fp2};
    use num_traits::Zero;

    #[test]
    fn counts() {
        let ctx = Fp::new(1, 7);
        assert_eq!(points(&ctx, 4).count() as u64, count_points(7, 4));
        assert_eq!(count_points(7, 4), 400);
        let ctx2 = Fp2::ctx(7);
        assert_eq!(points(&ctx2, 2).count() as u64, count_points(49, 2));
    }

    #[test]
    fn first_nonzero_is_one() {
        let ctx = Fp::new(1, 5);
        for pt in points(&ctx, 3) {
            let first = pt.iter().find(|c| !c.is_zero()).unwrap();
            assert_eq!(first.residue(), 1);
        }
    }
}
