//! Mechanical check of the defining relations of the symmetric automorphism
//! group and of the extra relations that pass to outer automorphisms.

use serde::Serialize;

use super::{eval_generator_word, outer_witness, GeneratorWord, Letter};
use crate::error::Result;
use crate::words::GroupContext;

/// Deliberate corruptions of the relation table, used to confirm that the
/// checker notices a broken build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RelationFault {
    /// Claim `ρ_j` fixes `α_{i,j}` instead of inverting it.
    RhoActionSign,
    /// Claim `σ α_{i,j} σ^-1 = α_{σ(j),σ(i)}`.
    SigmaIndexSwap,
    /// Permute the right-hand side of the triangle relation.
    TriangleOrder,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationCheck {
    pub family: &'static str,
    pub lhs: String,
    pub rhs: String,
    /// Checked in the outer automorphism group rather than exactly.
    pub outer: bool,
    pub pass: bool,
    /// Conjugating word for outer relations that hold.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationReport {
    pub n: usize,
    pub checks: Vec<RelationCheck>,
    pub all_pass: bool,
}

impl RelationReport {
    pub fn failures(&self) -> impl Iterator<Item = &RelationCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

pub fn check_relations(n: usize) -> Result<RelationReport> {
    check_relations_with(n, None)
}

fn word(n: usize, letters: Vec<Letter>) -> GeneratorWord {
    GeneratorWord::new(n, letters).expect("relation letters are in range")
}

fn commutator(n: usize, a: Letter, b: Letter) -> GeneratorWord {
    word(n, vec![a, b, a.inverse(), b.inverse()])
}

pub fn check_relations_with(n: usize, fault: Option<RelationFault>) -> Result<RelationReport> {
    let ctx = GroupContext::free(n)?;
    let a = Letter::a;
    let empty = GeneratorWord::empty(n);
    let mut table: Vec<(&'static str, GeneratorWord, GeneratorWord, bool)> = Vec::new();
    let distinct = |xs: &[usize]| {
        xs.iter()
            .enumerate()
            .all(|(p, x)| xs[p + 1..].iter().all(|y| y != x))
    };
    let idx = 1..=n;

    for i in idx.clone() {
        for j in idx.clone() {
            for k in idx.clone() {
                for l in idx.clone() {
                    if distinct(&[i, j, k, l]) {
                        table.push(("disjoint-commute", commutator(n, a(i, j), a(k, l)), empty.clone(), false));
                    }
                }
                if distinct(&[i, j, k]) {
                    table.push(("shared-target-commute", commutator(n, a(i, k), a(j, k)), empty.clone(), false));
                    let rhs = if fault == Some(RelationFault::TriangleOrder) {
                        word(n, vec![a(i, k), a(i, j), a(j, k)])
                    } else {
                        word(n, vec![a(i, k), a(j, k), a(i, j)])
                    };
                    table.push(("triangle", word(n, vec![a(i, j), a(j, k), a(i, k)]), rhs, false));
                }
            }
        }
    }

    for k in idx.clone() {
        table.push(("rho-order", word(n, vec![Letter::R(k), Letter::R(k)]), empty.clone(), false));
        for l in k + 1..=n {
            table.push(("rho-commute", commutator(n, Letter::R(k), Letter::R(l)), empty.clone(), false));
        }
        for i in idx.clone() {
            for j in idx.clone() {
                if i == j {
                    continue;
                }
                let flips = k == j && fault != Some(RelationFault::RhoActionSign);
                let rhs = if flips { Letter::a_inv(i, j) } else { a(i, j) };
                table.push((
                    "rho-action",
                    word(n, vec![Letter::R(k), a(i, j), Letter::R(k)]),
                    word(n, vec![rhs]),
                    false,
                ));
            }
        }
    }

    let tau = |p: usize, q: usize, x: usize| {
        if x == p {
            q
        } else if x == q {
            p
        } else {
            x
        }
    };
    for p in idx.clone() {
        for q in p + 1..=n {
            let s = Letter::s(p, q);
            table.push(("sigma-order", word(n, vec![s, s]), empty.clone(), false));
            for i in idx.clone() {
                for j in idx.clone() {
                    if i == j {
                        continue;
                    }
                    let (ti, tj) = if fault == Some(RelationFault::SigmaIndexSwap) {
                        (tau(p, q, j), tau(p, q, i))
                    } else {
                        (tau(p, q, i), tau(p, q, j))
                    };
                    table.push(("sigma-action", word(n, vec![s, a(i, j), s]), word(n, vec![a(ti, tj)]), false));
                }
                table.push((
                    "sigma-rho",
                    word(n, vec![s, Letter::R(i), s]),
                    word(n, vec![Letter::R(tau(p, q, i))]),
                    false,
                ));
            }
        }
    }
    // Coxeter relations for the adjacent transpositions.
    for i in 1..n {
        for j in i + 1..n {
            let (si, sj) = (Letter::s(i, i + 1), Letter::s(j, j + 1));
            let rel = if j == i + 1 {
                word(n, [si, sj].repeat(3))
            } else {
                word(n, [si, sj].repeat(2))
            };
            table.push(("sigma-coxeter", rel, empty.clone(), false));
        }
    }

    for j in idx.clone() {
        let prod = word(n, idx.clone().filter(|&i| i != j).map(|i| a(i, j)).collect());
        table.push(("inner", prod, empty.clone(), true));
    }

    let mut checks = Vec::with_capacity(table.len());
    for (family, lhs, rhs, outer) in table {
        let f = eval_generator_word(&lhs, ctx)?;
        let g = eval_generator_word(&rhs, ctx)?;
        let (pass, witness) = if outer {
            let w = outer_witness(&f, &g)?;
            (w.is_some(), w.map(|w| w.to_string()))
        } else {
            (f == g, None)
        };
        checks.push(RelationCheck {
            family,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            outer,
            pass,
            witness,
        });
    }
    let all_pass = checks.iter().all(|c| c.pass);
    Ok(RelationReport { n, checks, all_pass })
}
