//! Brute-force cross-check for the low-index search.
//!
//! Builds transitive permutation actions of degree `k` directly: generator
//! images are assigned point by point, each new point taking the next free
//! label, and a relator is only checked once its whole path is defined. No
//! deduction and no coset-table machinery is shared with the main search.
//! Distinct actions are then deduplicated by the stabilizer of point 1,
//! using a breadth-first relabelling written just for this module.

use std::collections::HashSet;

use crate::presentation::{Presentation, Word};
use crate::{Error, Result};

pub const ORACLE_MAX_INDEX: usize = 12;

const NONE: usize = usize::MAX;

struct Gen {
    involutory: bool,
}

struct Oracle {
    k: usize,
    gens: Vec<Gen>,
    // relators and must-fix words as (generator, inverse) letters
    relators: Vec<Vec<(usize, bool)>>,
    fix: Vec<Vec<(usize, bool)>>,
    seen: HashSet<Vec<usize>>,
    leaves: usize,
}

#[derive(Clone)]
struct Perms {
    img: Vec<Vec<usize>>,
    pre: Vec<Vec<usize>>,
    used: usize,
}

impl Perms {
    fn step(&self, p: usize, (g, inverse): (usize, bool)) -> usize {
        if inverse {
            self.pre[g][p]
        } else {
            self.img[g][p]
        }
    }

    fn walk(&self, start: usize, w: &[(usize, bool)]) -> Option<usize> {
        let mut p = start;
        for &l in w {
            p = self.step(p, l);
            if p == NONE {
                return None;
            }
        }
        Some(p)
    }
}

/// Counts subgroups of index exactly `k` that contain `<must_fix>`, by
/// exhaustive construction of permutation actions.
pub fn oracle_count(pres: &Presentation, k: usize, must_fix: &[Word]) -> Result<usize> {
    if k == 0 {
        return Err(Error::InvalidIndex(k));
    }
    if k > ORACLE_MAX_INDEX {
        return Err(Error::OracleTooLarge {
            k,
            max: ORACLE_MAX_INDEX,
        });
    }
    let letters = |w: &Word| -> Vec<(usize, bool)> { w.letters().iter().map(|l| (l.gen, l.inverse)).collect() };
    let gens: Vec<Gen> = pres
        .generators()
        .iter()
        .map(|g| Gen {
            involutory: g.involutory,
        })
        .collect();
    let mut o = Oracle {
        k,
        relators: pres.relators().iter().map(letters).collect(),
        fix: must_fix.iter().map(letters).collect(),
        seen: HashSet::new(),
        leaves: 0,
        gens,
    };
    let ng = o.gens.len();
    let perms = Perms {
        img: vec![vec![NONE; k]; ng],
        pre: vec![vec![NONE; k]; ng],
        used: 1,
    };
    o.dfs(perms, 0);
    debug_assert_eq!(o.leaves, o.seen.len(), "standardized labelling produced a duplicate");
    Ok(o.seen.len())
}

impl Oracle {
    fn dfs(&mut self, perms: Perms, slot: usize) {
        let ng = self.gens.len();
        // next unassigned (point, generator) slot
        let mut slot = slot;
        while slot < self.k * ng && perms.img[slot % ng][slot / ng] != NONE {
            slot += 1;
        }
        if slot == self.k * ng {
            self.leaf(&perms);
            return;
        }
        let (point, g) = (slot / ng, slot % ng);
        if point >= perms.used {
            // point never reached: the action would not be transitive
            return;
        }
        let mut targets: Vec<usize> = (0..perms.used).collect();
        if perms.used < self.k {
            targets.push(perms.used);
        }
        for t in targets {
            if perms.pre[g][t] != NONE {
                continue;
            }
            let mut next = perms.clone();
            if t == next.used {
                next.used += 1;
            }
            next.img[g][point] = t;
            next.pre[g][t] = point;
            if self.gens[g].involutory && t != point {
                if next.img[g][t] != NONE {
                    continue;
                }
                next.img[g][t] = point;
                next.pre[g][point] = t;
            }
            if self.plausible(&next) {
                self.dfs(next, slot + 1);
            }
        }
    }

    /// Rejects states where a fully defined relator path fails to close.
    fn plausible(&self, perms: &Perms) -> bool {
        for r in &self.relators {
            for start in 0..perms.used {
                if let Some(end) = perms.walk(start, r) {
                    if end != start {
                        return false;
                    }
                }
            }
        }
        for w in &self.fix {
            if let Some(end) = perms.walk(0, w) {
                if end != 0 {
                    return false;
                }
            }
        }
        true
    }

    fn leaf(&mut self, perms: &Perms) {
        if perms.used != self.k {
            return;
        }
        for r in &self.relators {
            for start in 0..self.k {
                if perms.walk(start, r) != Some(start) {
                    return;
                }
            }
        }
        for w in &self.fix {
            if perms.walk(0, w) != Some(0) {
                return;
            }
        }
        self.leaves += 1;
        self.seen.insert(stabilizer_key(perms, self.k));
    }
}

/// Relabels points breadth-first from point 0 along generator images; equal
/// keys mean equal point-0 stabilizers.
fn stabilizer_key(perms: &Perms, k: usize) -> Vec<usize> {
    let ng = perms.img.len();
    let mut label = vec![NONE; k];
    let mut order = vec![0];
    label[0] = 0;
    let mut i = 0;
    while i < order.len() {
        let p = order[i];
        for g in 0..ng {
            let t = perms.img[g][p];
            if label[t] == NONE {
                label[t] = order.len();
                order.push(t);
            }
        }
        i += 1;
    }
    let mut key = Vec::with_capacity(k * ng);
    for &p in &order {
        for g in 0..ng {
            key.push(label[perms.img[g][p]]);
        }
    }
    key
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{coxeter_presentation, vondyck_presentation, Mode, Schlafli};

    #[test]
    fn small_counts() {
        let s = Schlafli::new(3, 5).unwrap();
        let pres = vondyck_presentation(s);
        let stab = pres.tile_stabilizer_words(Mode::Direct).unwrap();
        assert_eq!(oracle_count(&pres, 10, &stab).unwrap(), 1);
        assert_eq!(oracle_count(&pres, 1, &[]).unwrap(), 1);
    }

    #[test]
    fn index_two_subgroups_of_coxeter_group() {
        // [p,q] with p, q even has 7 subgroups of index 2 (kernels of the
        // nonzero maps to Z/2 on three independent generators)
        let pres = coxeter_presentation(Schlafli::new(4, 6).unwrap());
        assert_eq!(oracle_count(&pres, 2, &[]).unwrap(), 7);
        // p odd forces r0 ~ r1, leaving 3
        let pres = coxeter_presentation(Schlafli::new(3, 8).unwrap());
        assert_eq!(oracle_count(&pres, 2, &[]).unwrap(), 3);
    }

    #[test]
    fn guards() {
        let pres = vondyck_presentation(Schlafli::new(4, 5).unwrap());
        assert!(matches!(
            oracle_count(&pres, 13, &[]),
            Err(Error::OracleTooLarge { .. })
        ));
        assert!(oracle_count(&pres, 0, &[]).is_err());
    }
}
