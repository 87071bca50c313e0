//! Finite group tables and their Cayley machines.

use crate::error::{Error, Result};
use crate::transducer::Transducer;

/// A finite group given by its multiplication table. Element 0 is the
/// identity; associativity, identity and inverses are verified on load.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    pub names: Vec<String>,
    /// `mult[a * order + b] = a * b`.
    pub mult: Vec<usize>,
}

impl GroupTable {
    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order() + b]
    }

    pub fn new(names: Vec<String>, mult: Vec<usize>) -> Result<GroupTable> {
        let order = names.len();
        if order == 0 {
            return Err(Error::InvalidGroupTable("no elements".into()));
        }
        if mult.len() != order * order {
            return Err(Error::InvalidGroupTable(
                "table shape does not match element count".into(),
            ));
        }
        if mult.iter().any(|&v| v >= order) {
            return Err(Error::InvalidGroupTable(
                "entry outside the element range".into(),
            ));
        }
        let g = GroupTable { names, mult };
        for a in 0..order {
            if g.mul(0, a) != a || g.mul(a, 0) != a {
                return Err(Error::InvalidGroupTable(format!(
                    "element 0 ({}) is not an identity",
                    g.names[0]
                )));
            }
        }
        for a in 0..order {
            if !(0..order).any(|b| g.mul(a, b) == 0) {
                return Err(Error::InvalidGroupTable(format!(
                    "{} has no inverse",
                    g.names[a]
                )));
            }
        }
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)) {
                        return Err(Error::InvalidGroupTable(format!(
                            "associativity fails at ({}, {}, {})",
                            g.names[a], g.names[b], g.names[c]
                        )));
                    }
                }
            }
        }
        Ok(g)
    }

    /// The cyclic group of the given order.
    pub fn cyclic(order: usize) -> GroupTable {
        let names = (0..order).map(|i| format!("g{i}")).collect();
        let mut mult = vec![0usize; order * order];
        for a in 0..order {
            for b in 0..order {
                mult[a * order + b] = (a + b) % order;
            }
        }
        GroupTable { names, mult }
    }

    /// Parses a CSV multiplication table: a header row of element names, then
    /// one row per element listing its products with each column element.
    pub fn parse_csv(text: &str) -> Result<GroupTable> {
        let mut rows: Vec<Vec<String>> = Vec::new();
        for line in text.lines() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            rows.push(trimmed.split(',').map(|c| c.trim().to_string()).collect());
        }
        if rows.is_empty() {
            return Err(Error::InvalidGroupTable("empty table".into()));
        }
        let names = rows[0].clone();
        let order = names.len();
        if rows.len() != order + 1 {
            return Err(Error::InvalidGroupTable(format!(
                "expected {} product rows, found {}",
                order,
                rows.len() - 1
            )));
        }
        let index = |name: &str| -> Result<usize> {
            names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::InvalidGroupTable(format!("unknown element {name}")))
        };
        let mut mult = vec![0usize; order * order];
        for (a, row) in rows[1..].iter().enumerate() {
            if row.len() != order {
                return Err(Error::InvalidGroupTable(format!(
                    "row {} has {} entries",
                    a + 1,
                    row.len()
                )));
            }
            for (b, cell) in row.iter().enumerate() {
                mult[a * order + b] = index(cell)?;
            }
        }
        GroupTable::new(names, mult)
    }

    pub fn to_csv(&self) -> String {
        let order = self.order();
        let mut s = self.names.join(",");
        s.push('\n');
        for a in 0..order {
            let row: Vec<&str> = (0..order)
                .map(|b| self.names[self.mul(a, b)].as_str())
                .collect();
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }
}

/// The Cayley machine of a finite group: states and alphabet are the group,
/// and state `m` reads `l` to the state `ml` outputting `ml`. Its inverse is
/// a reset automaton.
pub fn cayley_machine(g: &GroupTable) -> Transducer {
    let order = g.order();
    let mut next = vec![0usize; order * order];
    let mut out = vec![0usize; order * order];
    for m in 0..order {
        for l in 0..order {
            let ml = g.mul(m, l);
            next[m * order + l] = ml;
            out[m * order + l] = ml;
        }
    }
    Transducer::from_tables(order, g.names.clone(), next, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sync::sync_level;
    use crate::Caps;

    #[test]
    fn cyclic_tables_validate_and_round_trip() {
        let z3 = GroupTable::cyclic(3);
        let csv = z3.to_csv();
        let parsed = GroupTable::parse_csv(&csv).unwrap();
        assert_eq!(parsed, z3);
    }

    #[test]
    fn bad_tables_are_rejected() {
        // Header says two elements, products break associativity/identity.
        let text = "e,a\na,a\na,e\n";
        assert!(GroupTable::parse_csv(text).is_err());
    }

    #[test]
    fn cayley_machine_of_trivial_group_is_the_identity() {
        let t = cayley_machine(&GroupTable::cyclic(1));
        assert_eq!(t.state_count(), 1);
        assert_eq!(t.out(0, 0), 0);
    }

    #[test]
    fn inverse_of_cayley_machine_is_a_reset_automaton() {
        for order in 2..4 {
            let c = cayley_machine(&GroupTable::cyclic(order));
            let inv = c.inverse().unwrap();
            assert_eq!(sync_level(&inv, &Caps::default()).unwrap(), 1);
        }
    }
}
