//! The level-`k` dual automaton and the dual-zero tests.

use crate::error::Result;
use crate::minimize::{equivalent, minimize};
use crate::transducer::Transducer;
use crate::words::{count_words, Word};
use crate::Caps;

/// The level-`k` dual: states are the words of length `k`, letters are the
/// states of the base machine. Reading state-letter `q` from word `w` moves
/// to `lambda(w, q)` and outputs `pi(w, q)`.
#[derive(Debug, Clone)]
pub struct DualAutomaton {
    pub level: usize,
    /// The dual as a plain transducer over the alphabet of base states,
    /// with word states in rank order.
    pub machine: Transducer,
}

impl DualAutomaton {
    pub fn as_transducer(&self) -> &Transducer {
        &self.machine
    }
}

pub fn dual(t: &Transducer, k: usize, caps: &Caps) -> Result<DualAutomaton> {
    assert!(k >= 1, "dual needs k >= 1");
    let n = t.alphabet();
    let total = count_words(n, k, caps.word_cap)?;
    let letters = t.state_count();
    let mut names = Vec::with_capacity(total);
    let mut next = Vec::with_capacity(total * letters);
    let mut out = Vec::with_capacity(total * letters);
    for rank in 0..total {
        let w = Word::from_rank(rank, k, n);
        names.push(w.to_string());
        for q in 0..letters {
            let image = Word::new(t.read_output(q, w.letters()));
            next.push(image.rank(n));
            out.push(t.read_state(q, w.letters()));
        }
    }
    Ok(DualAutomaton {
        level: k,
        machine: Transducer::from_tables(letters, names, next, out),
    })
}

/// True iff the minimized level-`m` and level-`m+1` duals are equivalent,
/// which (with the product identity for duals) makes the level-`m` dual a
/// zero of the semigroup its level-1 dual generates.
pub fn dual_is_zero(t: &Transducer, m: usize, caps: &Caps) -> Result<bool> {
    let a = dual(t, m, caps)?;
    let b = dual(t, m + 1, caps)?;
    Ok(equivalent(a.as_transducer(), b.as_transducer())?.equivalent)
}

/// True iff every state of the minimized level-`m` dual has input-independent
/// transition and output. Together with `dual_is_zero` this certifies finite
/// order: every power then synchronizes at level `m`.
pub fn finite_order_certificate(t: &Transducer, m: usize, caps: &Caps) -> Result<bool> {
    let d = dual(t, m, caps)?;
    let md = minimize(d.as_transducer()).transducer;
    let letters = md.alphabet();
    for s in 0..md.state_count() {
        let target = md.next(s, 0);
        let output = md.out(s, 0);
        for q in 1..letters {
            if md.next(s, q) != target || md.out(s, q) != output {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::example_registry;
    use crate::transducer::Transducer;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn level_one_dual_of_infinite_order_machine_matches_figure() {
        let b = example_registry("B_WITNESS").unwrap().transducer;
        let d = dual(&b, 1, &caps()).unwrap();
        let m = d.as_transducer();
        assert_eq!(m.state_count(), 3);
        // Word-state 2 reads both state-letters back to word 0 outputting q1.
        let two = m.state_index("2").unwrap();
        let zero = m.state_index("0").unwrap();
        for q in 0..2 {
            assert_eq!(m.next(two, q), zero);
            assert_eq!(m.out(two, q), 1);
        }
        // Word-state 0 transitions: reading q0 lands on word 1, reading q1 on word 2.
        assert_eq!(m.next(zero, 0), m.state_index("1").unwrap());
        assert_eq!(m.next(zero, 1), two);
    }

    #[test]
    fn dual_of_identity_is_constant() {
        let id = Transducer::identity(3);
        let d = dual(&id, 2, &caps()).unwrap();
        let m = d.as_transducer();
        for s in 0..m.state_count() {
            assert_eq!(m.next(s, 0), s);
            assert_eq!(m.out(s, 0), 0);
        }
        assert!(dual_is_zero(&id, 1, &caps()).unwrap());
        assert!(finite_order_certificate(&id, 1, &caps()).unwrap());
    }

    #[test]
    fn minimized_level_three_dual_of_order_three_machine_is_a_cycle() {
        let c = example_registry("ORD3_C").unwrap().transducer;
        let d = dual(&c, 3, &caps()).unwrap();
        let md = minimize(d.as_transducer()).transducer;
        assert_eq!(md.state_count(), 3);
        for s in 0..3 {
            let target = md.next(s, 0);
            let output = md.out(s, 0);
            assert_ne!(target, s);
            for q in 1..3 {
                assert_eq!(md.next(s, q), target);
                assert_eq!(md.out(s, q), output);
            }
        }
        // The three states form one 3-cycle.
        let one_step = md.next(0, 0);
        let two_step = md.next(one_step, 0);
        assert_eq!(md.next(two_step, 0), 0);
        assert!(dual_is_zero(&c, 3, &caps()).unwrap());
        assert!(finite_order_certificate(&c, 3, &caps()).unwrap());
    }

    #[test]
    fn dual_word_states_of_order_two_machine_merge() {
        let b2 = example_registry("ORD2_B2").unwrap().transducer;
        let d = dual(&b2, 1, &caps()).unwrap();
        let m = minimize(d.as_transducer());
        assert_eq!(m.transducer.state_count(), 2);
        assert_eq!(m.class_of[0], m.class_of[1]);
        assert_ne!(m.class_of[0], m.class_of[2]);
    }

    #[test]
    fn dual_product_identity() {
        // minimize(dual(A, k+1)) == minimize(dual(A, k) * dual(A, 1)).
        for name in ["EX1_C", "ORD2_B2", "B_WITNESS", "G_H3"] {
            let t = example_registry(name).unwrap().transducer;
            for k in 1..3 {
                let left = dual(&t, k + 1, &caps()).unwrap();
                let right = dual(&t, k, &caps())
                    .unwrap()
                    .machine
                    .product(dual(&t, 1, &caps()).unwrap().as_transducer())
                    .unwrap();
                let r = equivalent(left.as_transducer(), &right).unwrap();
                assert!(
                    r.equivalent,
                    "dual product identity failed for {name} at {k}"
                );
            }
        }
    }
}
