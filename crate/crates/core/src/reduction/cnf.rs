//! 3-CNF formulas and DIMACS I/O.

use crate::alphabet::Word;
use crate::error::{Error, Result};
use rand::Rng;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Literal {
    /// 1-based variable index.
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal {
            var,
            positive: true,
        }
    }

    pub fn neg(var: usize) -> Self {
        Literal {
            var,
            positive: false,
        }
    }

    pub fn satisfied_by(&self, value: bool) -> bool {
        value == self.positive
    }

    fn to_dimacs(self) -> i64 {
        if self.positive {
            self.var as i64
        } else {
            -(self.var as i64)
        }
    }
}

pub type Clause = [Literal; 3];

/// Conjunction of 3-literal clauses over `x₁..xₙ`. Each clause mentions
/// three distinct variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> Result<Self> {
        for (i, c) in clauses.iter().enumerate() {
            validate_clause(c, num_vars)
                .map_err(|m| Error::InvalidArgument(format!("clause {}: {m}", i + 1)))?;
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Literal of clause `i` on variable `var`, if any.
    pub fn literal_on(&self, clause: usize, var: usize) -> Option<Literal> {
        self.clauses[clause].iter().copied().find(|l| l.var == var)
    }

    pub fn clause_satisfied(&self, clause: usize, assignment: &[bool]) -> bool {
        self.clauses[clause]
            .iter()
            .any(|l| l.satisfied_by(assignment[l.var - 1]))
    }

    pub fn count_satisfied_bits(&self, assignment: &[bool]) -> usize {
        (0..self.clauses.len())
            .filter(|&i| self.clause_satisfied(i, assignment))
            .count()
    }

    /// `N_w`: clauses satisfied under `xᵢ = wᵢ`, for a binary word of length `n`.
    pub fn count_satisfied(&self, w: &Word) -> Result<usize> {
        if w.len() != self.num_vars {
            return Err(Error::LengthMismatch {
                expected: self.num_vars,
                got: w.len(),
            });
        }
        Ok(self.count_satisfied_bits(&word_bits(w)))
    }

    /// `max_w N_w` over all `2ⁿ` assignments.
    pub fn brute_force_max_satisfied(&self) -> usize {
        assert!(self.num_vars < 32, "brute force limited to < 32 variables");
        (0u64..1 << self.num_vars)
            .map(|mask| {
                let bits: Vec<bool> = (0..self.num_vars).map(|v| mask >> v & 1 == 1).collect();
                self.count_satisfied_bits(&bits)
            })
            .max()
            .unwrap_or(0)
    }

    pub fn brute_force_satisfiable(&self) -> bool {
        self.brute_force_max_satisfied() == self.clauses.len()
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            let lits: Vec<String> = c.iter().map(|l| l.to_dimacs().to_string()).collect();
            out.push_str(&format!("{} 0\n", lits.join(" ")));
        }
        out
    }

    /// `(x₁ ∨ x₂ ∨ x₃) ∧ (¬x₂ ∨ x₃ ∨ x₄)`.
    pub fn running_example() -> Self {
        CnfFormula::new(
            4,
            vec![
                [Literal::pos(1), Literal::pos(2), Literal::pos(3)],
                [Literal::neg(2), Literal::pos(3), Literal::pos(4)],
            ],
        )
        .unwrap()
    }

    /// All eight sign patterns over `{x₁, x₂, x₃}`; unsatisfiable.
    pub fn all_sign_patterns() -> Self {
        let clauses = (0..8u8)
            .map(|m| {
                let lit = |v: usize| Literal {
                    var: v,
                    positive: m >> (v - 1) & 1 == 1,
                };
                [lit(1), lit(2), lit(3)]
            })
            .collect();
        CnfFormula::new(3, clauses).unwrap()
    }

    /// Uniform random 3-CNF: each clause picks three distinct variables and
    /// independent signs.
    pub fn random<R: Rng>(rng: &mut R, num_vars: usize, num_clauses: usize) -> Self {
        assert!(num_vars >= 3, "3-CNF needs at least three variables");
        let clauses = (0..num_clauses)
            .map(|_| {
                let vars = rand::seq::index::sample(rng, num_vars, 3);
                let mut it = vars.iter().map(|v| Literal {
                    var: v + 1,
                    positive: rng.gen(),
                });
                [it.next().unwrap(), it.next().unwrap(), it.next().unwrap()]
            })
            .collect();
        CnfFormula { num_vars, clauses }
    }
}

pub(crate) fn word_bits(w: &Word) -> Vec<bool> {
    w.ids().iter().map(|&s| s == 1).collect()
}

fn validate_clause(c: &Clause, num_vars: usize) -> std::result::Result<(), String> {
    for l in c {
        if l.var == 0 || l.var > num_vars {
            return Err(format!("variable {} out of range 1..={num_vars}", l.var));
        }
    }
    if c[0].var == c[1].var || c[0].var == c[2].var || c[1].var == c[2].var {
        return Err("a variable occurs twice in one clause".into());
    }
    Ok(())
}

/// Parses DIMACS CNF restricted to width-3 clauses. Comment lines start
/// with `c`; clauses end with `0` and may span lines.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut pending: Vec<i64> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let err = |message: String| Error::Dimacs {
            line: line_no,
            message,
        };
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(err("duplicate header".into()));
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "cnf" {
                return Err(err(format!("malformed header `{line}`")));
            }
            let n = parts[2]
                .parse()
                .map_err(|_| err(format!("bad variable count `{}`", parts[2])))?;
            let k = parts[3]
                .parse()
                .map_err(|_| err(format!("bad clause count `{}`", parts[3])))?;
            header = Some((n, k));
            continue;
        }
        let (n, _) = header.ok_or_else(|| err("clause before `p cnf` header".into()))?;
        for tok in line.split_whitespace() {
            let v: i64 = tok
                .parse()
                .map_err(|_| err(format!("bad literal `{tok}`")))?;
            if v != 0 {
                pending.push(v);
                continue;
            }
            if pending.len() != 3 {
                return Err(err(format!(
                    "clause has {} literals, expected 3",
                    pending.len()
                )));
            }
            let lits: Vec<Literal> = pending
                .drain(..)
                .map(|v| Literal {
                    var: v.unsigned_abs() as usize,
                    positive: v > 0,
                })
                .collect();
            let clause = [lits[0], lits[1], lits[2]];
            validate_clause(&clause, n).map_err(err)?;
            clauses.push(clause);
        }
    }
    if !pending.is_empty() {
        return Err(Error::Dimacs {
            line: last_line,
            message: "unterminated clause".into(),
        });
    }
    let (n, k) = header.ok_or(Error::Dimacs {
        line: last_line,
        message: "missing `p cnf` header".into(),
    })?;
    if clauses.len() != k {
        return Err(Error::Dimacs {
            line: last_line,
            message: format!("header declares {k} clauses, found {}", clauses.len()),
        });
    }
    Ok(CnfFormula {
        num_vars: n,
        clauses,
    })
}

impl fmt::Display for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let clauses: Vec<String> = self
            .clauses
            .iter()
            .map(|c| {
                let lits: Vec<String> = c
                    .iter()
                    .map(|l| format!("{}x{}", if l.positive { "" } else { "¬" }, l.var))
                    .collect();
                format!("({})", lits.join(" ∨ "))
            })
            .collect();
        write!(f, "{}", clauses.join(" ∧ "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use rand::SeedableRng;

    #[test]
    fn parses_running_example() {
        let f = parse_dimacs("c example\np cnf 4 2\n1 2 3 0\n-2 3 4 0\n").unwrap();
        assert_eq!(f.num_vars(), 4);
        assert_eq!(f.num_clauses(), 2);
        assert_eq!(f, CnfFormula::running_example());
        assert_eq!(parse_dimacs(&f.to_dimacs()).unwrap(), f);
    }

    #[test]
    fn clauses_may_span_lines() {
        let f = parse_dimacs("p cnf 3 1\n1 -2\n3 0\n").unwrap();
        assert_eq!(
            f.clauses()[0],
            [Literal::pos(1), Literal::neg(2), Literal::pos(3)]
        );
    }

    #[test]
    fn rejects_bad_input() {
        let cases = [
            "p cnf 4 1\n0\n",         // empty clause
            "p cnf 4 1\n1 2 0\n",     // width 2
            "p cnf 4 1\n1 2 3 4 0\n", // width 4
            "p cnf 4 1\n1 -1 2 0\n",  // repeated variable
            "p cnf 4 1\n1 1 2 0\n",   // duplicate literal
            "p cnf 3 1\n1 2 4 0\n",   // out of range
            "p dnf 3 1\n1 2 3 0\n",   // header kind
            "p cnf x 1\n1 2 3 0\n",   // header count
            "1 2 3 0\n",              // no header
            "p cnf 3 2\n1 2 3 0\n",   // clause count
            "p cnf 3 1\n1 2 3\n",     // unterminated
        ];
        for text in cases {
            assert!(
                matches!(parse_dimacs(text), Err(Error::Dimacs { .. })),
                "{text:?}"
            );
        }
    }

    #[test]
    fn counts_satisfied_clauses() {
        let f = CnfFormula::running_example();
        let b = Alphabet::binary();
        assert_eq!(
            f.count_satisfied(&b.parse_word("1111").unwrap()).unwrap(),
            2
        );
        assert_eq!(
            f.count_satisfied(&b.parse_word("0100").unwrap()).unwrap(),
            1
        );
        assert!(matches!(
            f.count_satisfied(&b.parse_word("11").unwrap()),
            Err(Error::LengthMismatch {
                expected: 4,
                got: 2
            })
        ));
    }

    #[test]
    fn sign_patterns_are_unsatisfiable() {
        let f = CnfFormula::all_sign_patterns();
        assert_eq!(f.brute_force_max_satisfied(), 7);
        assert!(!f.brute_force_satisfiable());
        assert!(CnfFormula::running_example().brute_force_satisfiable());
    }

    #[test]
    fn random_formulas_are_well_formed() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let f = CnfFormula::random(&mut rng, 5, 9);
            assert!(CnfFormula::new(f.num_vars(), f.clauses().to_vec()).is_ok());
            assert!(f.brute_force_max_satisfied() <= f.num_clauses());
        }
    }
}
