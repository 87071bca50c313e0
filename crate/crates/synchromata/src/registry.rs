//! The registry of example machines used across the test suites, the
//! examples, and the command line.

use crate::combine::{combine_disjoint, CombinePart, CombineSpec};
use crate::error::{Error, Result};
use crate::group::{cayley_machine, GroupTable};
use crate::transducer::Transducer;
use crate::trn::parse_trn;
use crate::Caps;

/// A named machine with its provenance note and known facts.
#[derive(Debug, Clone)]
pub struct RegistryEntry {
    pub name: &'static str,
    pub transducer: Transducer,
    pub note: &'static str,
    pub facts: &'static [&'static str],
}

struct Spec {
    name: &'static str,
    trn: &'static str,
    note: &'static str,
    facts: &'static [&'static str],
}

const SPECS: &[Spec] = &[
    Spec {
        name: "EX1_C",
        trn: "alphabet: 3\nstates: q0 q1 q2\nq0: 0|1->q0 1|2->q1 2|0->q2\nq1: 0|0->q0 1|2->q1 2|1->q2\nq2: 0|2->q1 1|1->q0 2|0->q2\n",
        note: "Three-state machine over X_3 whose level-2 word permutation is (00 11 22)(10 20 12)(21 01 02).",
        facts: &[
            "bi-synchronizing at level 2",
            "forcing sets {00,10,21} -> q0, {01,11,20} -> q1, {02,12,22} -> q2",
            "order 3",
        ],
    },
    Spec {
        name: "ORD3_C",
        trn: "alphabet: 3\nstates: q0 q1 q2\nq0: 0|1->q0 1|2->q1 2|0->q2\nq1: 0|0->q0 1|2->q1 2|1->q2\nq2: 0|2->q1 1|1->q0 2|0->q2\n",
        note: "The same machine as EX1_C, registered under the name its order-3 role uses.",
        facts: &["order 3", "conjugate of the single-state rotation (0 1 2)"],
    },
    Spec {
        name: "ORD2_B2",
        trn: "alphabet: 3\nstates: q0 q1\nq0: 0|0->q0 1|1->q0 2|2->q1\nq1: 0|1->q0 1|0->q0 2|2->q1\n",
        note: "Reset machine of order 2; word-states 0 and 1 of its level-1 dual merge under minimization.",
        facts: &["synchronizing at level 1", "order 2"],
    },
    Spec {
        name: "M_NOTCONJ",
        trn: "alphabet: 3\nstates: q0 q1 q2\nq0: 0|2->q0 1|0->q1 2|1->q2\nq1: 0|2->q0 1|1->q1 2|0->q1\nq2: 0|2->q0 1|0->q1 2|1->q1\n",
        note: "Machine whose level-3 spectrum differs from its inverse's, so the two are not conjugate.",
        facts: &[
            "spectrum at 3: {(3,1,(3,1,2)), (3,1,(21,7,1))}",
            "inverse spectrum at 3: {(3,1,(3,1,1)), (3,1,(21,7,2))}",
        ],
    },
    Spec {
        name: "B_WITNESS",
        trn: "alphabet: 3\nstates: q0 q1\nq0: 0|1->q0 1|2->q0 2|0->q1\nq1: 0|2->q0 1|1->q0 2|0->q1\n",
        note: "Two-state machine of infinite order; its minimal bad-pairs graph at level 1 has a self-loop at {q0,q1} and ...111.(02)(02)... lies on an infinite orbit.",
        facts: &["synchronizing at level 1", "infinite order"],
    },
    Spec {
        name: "A4_NOCIRCUIT",
        trn: "alphabet: 3\nstates: q1 q2 q3 q4\nq1: 0|1->q1 1|2->q2 2|0->q4\nq2: 0|1->q1 1|2->q3 2|0->q4\nq3: 0|0->q1 1|2->q3 2|1->q4\nq4: 0|2->q2 1|1->q1 2|0->q4\n",
        note: "Four-state machine (letters relabeled from {1,2,3} to {0,1,2}): the general bad-pairs graph at level 3 has a loop at {q1,q2} while the minimal graph is acyclic.",
        facts: &["bi-synchronizing at level 3", "infinite order", "sigma products of full length are all constant"],
    },
    Spec {
        name: "H5_FINITE_SPLIT",
        trn: "alphabet: 5\nstates: q1 q2 q3 q4 q5\nq1: 0|4->q4 1|0->q1 2|2->q5 3|3->q3 4|1->q2\nq2: 0|0->q1 1|4->q4 2|3->q3 3|2->q5 4|1->q2\nq3: 0|1->q1 1|3->q4 2|2->q3 3|4->q5 4|0->q2\nq4: 0|4->q4 1|1->q1 2|3->q5 3|2->q3 4|0->q2\nq5: 0|4->q4 1|1->q1 2|2->q3 3|3->q5 4|0->q2\n",
        note: "Finite-order machine whose dual splits at its synchronizing level; the next dual power is the zero.",
        facts: &["order 24", "synchronizing at level 3", "dual splits at level 3, collapses at level 4"],
    },
    Spec {
        name: "G_H3",
        trn: "alphabet: 3\nstates: b a\nb: 0|0->b 1|2->a 2|1->b\na: 0|1->b 1|2->a 2|0->b\n",
        note: "Two-state machine over X_3 with infinite order and core growth at least 2^(m/2). State a reads 0|1->b and 2|0->b; these two outputs pin the machine so that powers from (b,b) transition as bb -1|1-> ab -0|2-> ba -0|1-> bb.",
        facts: &["bi-synchronizing at level 1", "infinite order", "states of the m-th power grow at least like 2^floor(m/2)"],
    },
    Spec {
        name: "H_H4",
        trn: "alphabet: 4\nstates: a1 a2\na1: 0|1->a1 1|2->a1 2|0->a2 3|3->a2\na2: 0|2->a1 1|1->a1 2|3->a2 3|0->a2\n",
        note: "Two-state machine over X_4 whose outputs hit every forcing set from every word, so the core of each power is the whole power.",
        facts: &["synchronizing at level 1", "raw power m has 2^m states, all in the core"],
    },
    Spec {
        name: "SHIFT2",
        trn: "alphabet: 2\nstates: a1 a2\na1: 0|0->a1 1|0->a2\na2: 0|1->a1 1|1->a2\n",
        note: "The two-letter shift: position t of the output copies position t-1 of the input. The source drawing labels two edges from a2 identically; this entry uses a2: 0|1->a1 and 1|1->a2, which is the choice realizing the shift.",
        facts: &["synchronizing at level 1", "state a1 is not a local permutation", "bijective on lines"],
    },
    Spec {
        name: "BASE_B",
        trn: "alphabet: 4\nstates: q1 q2 q3\nq1: 0|0->q2 1|1->q2 2|2->q1 3|3->q3\nq2: 0|0->q2 1|1->q2 2|3->q1 3|2->q3\nq3: 0|1->q2 1|0->q2 2|2->q1 3|3->q3\n",
        note: "Reset machine of order 4 whose inverse needs the maximal level for three states.",
        facts: &["synchronizing at level 1", "inverse synchronizing at level 2", "order 4"],
    },
    Spec {
        name: "BPRIME",
        trn: "alphabet: 5\nstates: q1 q2 q3 p\nq1: 0|0->q2 1|1->q2 2|2->q1 3|3->q3 4|4->p\nq2: 0|0->q2 1|1->q2 2|3->q1 3|2->q3 4|4->p\nq3: 0|1->q2 1|0->q2 2|2->q1 3|3->q3 4|4->p\np: 0|3->q2 1|0->q2 2|1->q1 3|2->q3 4|4->p\n",
        note: "BASE_B merged with a one-letter identity using the permutation 0->3,1->0,2->1,3->2 on the first block; synchronizing at level 1 with inverse level 3.",
        facts: &["synchronizing at level 1", "inverse synchronizing at level 3", "order 8"],
    },
    Spec {
        name: "COMBINED_H5",
        trn: "alphabet: 5\nstates: q0 q1 q2 p\nq0: 0|1->q1 1|2->q0 2|0->q2 3|3->p 4|4->p\nq1: 0|1->q1 1|0->q2 2|2->q0 3|3->p 4|4->p\nq2: 0|2->q1 1|1->q0 2|0->q2 3|3->p 4|4->p\np: 0|0->q1 1|1->q0 2|2->q2 3|4->p 4|3->p\n",
        note: "ORD3_H3 and ORD2_H2 side by side with identity outputs on foreign letters: an order-6 element on five letters.",
        facts: &["order 6", "synchronizing at level at most 3"],
    },
    Spec {
        name: "ORD3_H3",
        trn: "alphabet: 3\nstates: q0 q1 q2\nq0: 0|1->q1 1|2->q0 2|0->q2\nq1: 0|1->q1 1|0->q2 2|2->q0\nq2: 0|2->q1 1|1->q0 2|0->q2\n",
        note: "Order-3 machine over X_3 used as the left part of COMBINED_H5.",
        facts: &["order 3"],
    },
    Spec {
        name: "ORD2_H2",
        trn: "alphabet: 2\nstates: p\np: 0|1->p 1|0->p\n",
        note: "The single-state swap on two letters.",
        facts: &["order 2"],
    },
    Spec {
        name: "ONEWAY_SQUARE",
        trn: "alphabet: 4\nstates: q0 q1 q2 q3 q4\nq0: 0|3->q0 1|3->q1 2|2->q3 3|2->q1\nq1: 0|1->q4 1|1->q2 2|0->q3 3|0->q1\nq2: 0|1->q4 1|1->q2 2|2->q3 3|2->q1\nq3: 0|3->q0 1|2->q1 2|2->q3 3|3->q1\nq4: 0|3->q0 1|3->q1 2|0->q3 3|0->q1\n",
        note: "Five-state machine over X_4 with non-permutation states. Whether its square stays injective on lines is measured by the tests, not assumed.",
        facts: &["synchronizing at level 2", "bijective on lines", "the square's minimized core has 11 states and non-permutation states"],
    },
];

/// Returns the named machine. The registry contains every figure machine plus
/// the identities ID_1 .. ID_5 (A_H1 is the one-letter identity under the
/// name its combination role uses) and the derived entries CM_Z2, CM_Z3 and
/// BPRIME2.
pub fn example_registry(name: &str) -> Result<RegistryEntry> {
    for spec in SPECS {
        if spec.name == name {
            let transducer = parse_trn(spec.trn).expect("registry machine parses");
            return Ok(RegistryEntry {
                name: spec.name,
                transducer,
                note: spec.note,
                facts: spec.facts,
            });
        }
    }
    match name {
        "ID_1" | "ID_2" | "ID_3" | "ID_4" | "ID_5" => {
            let n: usize = name[3..].parse().unwrap();
            Ok(RegistryEntry {
                name: match n {
                    1 => "ID_1",
                    2 => "ID_2",
                    3 => "ID_3",
                    4 => "ID_4",
                    _ => "ID_5",
                },
                transducer: Transducer::identity(n),
                note: "The single-state identity.",
                facts: &["synchronizing at level 0", "order 1"],
            })
        }
        "A_H1" => Ok(RegistryEntry {
            name: "A_H1",
            transducer: Transducer::identity(1).with_names(vec!["p".to_string()]),
            note: "The single-state identity on a one-letter alphabet, used as a combination part.",
            facts: &["synchronizing at level 0", "order 1"],
        }),
        "CM_Z2" => Ok(RegistryEntry {
            name: "CM_Z2",
            transducer: cayley_machine(&GroupTable::cyclic(2)),
            note:
                "The Cayley machine of the cyclic group of order 2; its m-th power has 2^m states.",
            facts: &[
                "inverse is a reset automaton",
                "power m has exactly 2^m states",
            ],
        }),
        "CM_Z3" => Ok(RegistryEntry {
            name: "CM_Z3",
            transducer: cayley_machine(&GroupTable::cyclic(3)),
            note: "The Cayley machine of the cyclic group of order 3.",
            facts: &[
                "inverse is a reset automaton",
                "power m has exactly 3^m states",
            ],
        }),
        "BPRIME2" => {
            let bprime = example_registry("BPRIME")?.transducer;
            let tail = Transducer::identity(1).with_names(vec!["pp".to_string()]);
            let spec = CombineSpec {
                parts: vec![
                    CombinePart {
                        transducer: bprime,
                        block: (0, 4),
                        sigma: Some(vec![4, 0, 1, 2, 3]),
                        targets: None,
                    },
                    CombinePart {
                        transducer: tail,
                        block: (5, 5),
                        sigma: None,
                        targets: None,
                    },
                ],
            };
            Ok(RegistryEntry {
                name: "BPRIME2",
                transducer: combine_disjoint(&spec, &Caps::default())?,
                note: "BPRIME merged once more with a one-letter identity, via the permutation sending 4 to 3; one further step in the synchronizing-versus-inverse-level gap family.",
                facts: &["synchronizing at level 1", "inverse synchronizing at level 4", "order 120"],
            })
        }
        _ => Err(Error::UnknownName(name.to_string())),
    }
}

/// Every registry name, for iteration in tests and the command line.
pub fn registry_names() -> Vec<&'static str> {
    let mut names: Vec<&'static str> = SPECS.iter().map(|s| s.name).collect();
    names.extend([
        "ID_1", "ID_2", "ID_3", "ID_4", "ID_5", "A_H1", "CM_Z2", "CM_Z3", "BPRIME2",
    ]);
    names
}
