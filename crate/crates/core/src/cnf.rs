//! 3-SAT instances: parsing, generation, and exact solving by exhaustive search.
//!
//! Conventions used throughout the crate:
//!
//! * Variables are 1-based (`x1 ..= xn`), matching DIMACS.
//! * An [`Assignment`] packs variable `q_k` into bit `k - 1` of an integer,
//!   so `q1` is the least significant bit and the basis-state index of the
//!   simulator equals the assignment value directly.
//! * Bit value 1 means the variable is assigned true.

use std::collections::HashSet;
use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{DimacsError, Error, Result};

/// Largest `n` for which exhaustive enumeration of all `2^n` assignments is
/// accepted by default.
pub const DEFAULT_BRUTE_FORCE_CAP: u32 = 24;

/// A single literal: a 1-based variable index, possibly negated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    variable: u32,
    negated: bool,
}

impl Literal {
    /// Creates a literal for `variable` (1-based).
    ///
    /// Panics if `variable` is 0; use [`Literal::from_dimacs`] for untrusted
    /// input.
    pub fn new(variable: u32, negated: bool) -> Self {
        assert!(variable >= 1, "variable indices are 1-based");
        Self { variable, negated }
    }

    /// Builds a literal from a signed DIMACS code (`-3` means `¬x3`).
    pub fn from_dimacs(code: i32) -> Option<Self> {
        if code == 0 {
            return None;
        }
        Some(Self {
            variable: code.unsigned_abs(),
            negated: code < 0,
        })
    }

    /// Signed DIMACS code of this literal.
    pub fn to_dimacs(self) -> i32 {
        let v = self.variable as i32;
        if self.negated {
            -v
        } else {
            v
        }
    }

    pub fn variable(self) -> u32 {
        self.variable
    }

    pub fn negated(self) -> bool {
        self.negated
    }

    /// The same variable with the opposite polarity.
    pub fn negation(self) -> Self {
        Self {
            variable: self.variable,
            negated: !self.negated,
        }
    }

    /// True when this literal evaluates to true under `assignment`.
    #[inline]
    pub fn is_satisfied_by(self, assignment: Assignment) -> bool {
        assignment.value(self.variable) != self.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "-{}", self.variable)
        } else {
            write!(f, "{}", self.variable)
        }
    }
}

/// A disjunction of exactly three literals over three distinct variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Clause {
    literals: [Literal; 3],
}

impl Clause {
    /// Builds a clause, rejecting repeated variables.
    pub fn new(literals: [Literal; 3]) -> Result<Self> {
        for i in 0..3 {
            for j in (i + 1)..3 {
                if literals[i].variable() == literals[j].variable() {
                    return Err(Error::InvalidArgument(format!(
                        "clause repeats variable {}",
                        literals[i].variable()
                    )));
                }
            }
        }
        Ok(Self { literals })
    }

    /// Builds a clause from three signed DIMACS codes.
    pub fn from_dimacs(codes: [i32; 3]) -> Result<Self> {
        let mut literals = [Literal::new(1, false); 3];
        for (lit, &code) in literals.iter_mut().zip(codes.iter()) {
            *lit = Literal::from_dimacs(code).ok_or_else(|| {
                Error::InvalidArgument("literal code 0 is reserved as terminator".into())
            })?;
        }
        Self::new(literals)
    }

    pub fn literals(&self) -> &[Literal; 3] {
        &self.literals
    }

    /// Largest variable index referenced by this clause.
    pub fn max_variable(&self) -> u32 {
        self.literals.iter().map(|l| l.variable()).max().unwrap()
    }

    /// True when at least one literal is true under `assignment`.
    #[inline]
    pub fn is_satisfied_by(&self, assignment: Assignment) -> bool {
        self.literals.iter().any(|l| l.is_satisfied_by(assignment))
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {}",
            self.literals[0], self.literals[1], self.literals[2]
        )
    }
}

/// A 3-SAT formula: a variable count and an ordered list of clauses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfInstance {
    num_variables: u32,
    clauses: Vec<Clause>,
}

impl CnfInstance {
    /// Builds an instance, checking that at least one clause is present and
    /// that every literal stays within the declared variable range.
    pub fn new(num_variables: u32, clauses: Vec<Clause>) -> Result<Self> {
        if num_variables == 0 {
            return Err(Error::InvalidArgument(
                "an instance needs at least one variable".into(),
            ));
        }
        if clauses.is_empty() {
            return Err(Error::InvalidArgument(
                "an instance needs at least one clause".into(),
            ));
        }
        for clause in &clauses {
            if clause.max_variable() > num_variables {
                return Err(Error::InvalidArgument(format!(
                    "clause `{clause}` references a variable beyond {num_variables}"
                )));
            }
        }
        Ok(Self {
            num_variables,
            clauses,
        })
    }

    pub fn num_variables(&self) -> u32 {
        self.num_variables
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Number of basis states / assignments, `2^n`.
    pub fn dimension(&self) -> usize {
        1usize << self.num_variables
    }

    /// True when every clause is satisfied (short-circuits on the first
    /// violated clause).
    pub fn is_satisfied_by(&self, assignment: Assignment) -> bool {
        self.clauses.iter().all(|c| c.is_satisfied_by(assignment))
    }

    /// Iterates over all `2^n` assignments in ascending order.
    pub fn assignments(&self) -> impl Iterator<Item = Assignment> + '_ {
        let n = self.num_variables;
        (0..self.dimension() as u64).map(move |bits| Assignment::new(bits, n))
    }
}

/// A complete truth assignment, packed into the bits of an integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    bits: u64,
    num_variables: u32,
}

impl Assignment {
    /// Packs `bits` as an assignment over `num_variables` variables.
    ///
    /// Panics if `bits` has a bit set at or above position `num_variables`.
    pub fn new(bits: u64, num_variables: u32) -> Self {
        assert!(num_variables >= 1 && num_variables <= 63);
        assert!(
            bits < (1u64 << num_variables),
            "assignment bits {bits} out of range for {num_variables} variables"
        );
        Self {
            bits,
            num_variables,
        }
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn num_variables(self) -> u32 {
        self.num_variables
    }

    /// Basis-state index of this assignment (identical to `bits`).
    pub fn index(self) -> usize {
        self.bits as usize
    }

    /// Truth value of `variable` (1-based).
    #[inline]
    pub fn value(self, variable: u32) -> bool {
        debug_assert!(variable >= 1 && variable <= self.num_variables);
        (self.bits >> (variable - 1)) & 1 == 1
    }
}

impl fmt::Display for Assignment {
    /// Renders as a bitstring in `q1 q2 ... qn` order (q1 first).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in 1..=self.num_variables {
            write!(f, "{}", if self.value(v) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// Parses DIMACS CNF text: `c` comment lines, one `p cnf <n> <m>` header,
/// then `m` clause lines of three nonzero integers terminated by 0.
pub fn parse_dimacs(input: &str) -> Result<CnfInstance> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut header_line = 0usize;

    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(DimacsError::BadToken {
                    line: line_no,
                    token: "p".into(),
                }
                .into());
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let parsed = if parts.len() == 4 && parts[0] == "p" && parts[1] == "cnf" {
                match (parts[2].parse::<u32>(), parts[3].parse::<usize>()) {
                    (Ok(n), Ok(m)) if n >= 1 => Some((n, m)),
                    _ => None,
                }
            } else {
                None
            };
            header = Some(parsed.ok_or(DimacsError::MalformedHeader {
                line: line_no,
                text: line.to_string(),
            })?);
            header_line = line_no;
            continue;
        }

        let (num_variables, declared) = header.ok_or(DimacsError::MissingHeader)?;
        let mut codes: Vec<i32> = Vec::with_capacity(4);
        let mut terminated = false;
        for token in line.split_whitespace() {
            let code: i32 = token.parse().map_err(|_| DimacsError::BadToken {
                line: line_no,
                token: token.to_string(),
            })?;
            if code == 0 {
                terminated = true;
                break;
            }
            codes.push(code);
        }
        if !terminated {
            return Err(DimacsError::MissingTerminator { line: line_no }.into());
        }
        if codes.len() != 3 {
            return Err(DimacsError::ClauseLength {
                line: line_no,
                len: codes.len(),
            }
            .into());
        }
        for &code in &codes {
            let variable = code.unsigned_abs();
            if variable > num_variables {
                return Err(DimacsError::VariableOutOfRange {
                    line: line_no,
                    variable,
                    num_variables,
                }
                .into());
            }
        }
        let clause =
            Clause::from_dimacs([codes[0], codes[1], codes[2]]).map_err(|_| {
                DimacsError::RepeatedVariable {
                    line: line_no,
                    variable: first_repeated(&codes),
                }
            })?;
        if clauses.len() == declared {
            return Err(DimacsError::ClauseCountMismatch {
                declared,
                found: clauses.len() + 1,
            }
            .into());
        }
        clauses.push(clause);
    }

    let (num_variables, declared) = header.ok_or(DimacsError::MissingHeader)?;
    if clauses.len() != declared {
        return Err(DimacsError::ClauseCountMismatch {
            declared,
            found: clauses.len(),
        }
        .into());
    }
    let _ = header_line;
    CnfInstance::new(num_variables, clauses)
}

fn first_repeated(codes: &[i32]) -> u32 {
    for i in 0..codes.len() {
        for j in (i + 1)..codes.len() {
            if codes[i].unsigned_abs() == codes[j].unsigned_abs() {
                return codes[i].unsigned_abs();
            }
        }
    }
    0
}

/// Serializes an instance as DIMACS CNF. `parse_dimacs` inverts this exactly,
/// clause order included.
pub fn write_dimacs(instance: &CnfInstance) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "p cnf {} {}\n",
        instance.num_variables(),
        instance.num_clauses()
    ));
    for clause in instance.clauses() {
        out.push_str(&format!("{clause} 0\n"));
    }
    out
}

/// The built-in 6-variable, 27-clause reference instance.
///
/// Its single satisfying assignment is `x1=1, x2=1, x3=0, x4=1, x5=0, x6=0`
/// (bitstring `110100`, basis index 11), which makes it a convenient golden
/// fixture: the final Hamiltonian built from it has a unique ground state.
pub fn paper_instance() -> CnfInstance {
    const CODES: [[i32; 3]; 27] = [
        [-1, -4, -5],
        [-2, -3, -4],
        [1, 2, -5],
        [3, 4, 5],
        [4, 5, -6],
        [-1, -3, -5],
        [1, -2, -5],
        [2, -3, -6],
        [-1, -2, -6],
        [3, -5, -6],
        [1, -2, -4],
        [2, 3, -4],
        [2, 5, -6],
        [2, -3, -5],
        [-2, -3, -4],
        [2, 3, 6],
        [-1, -2, -3],
        [-1, -4, -5],
        [-3, -4, -6],
        [-4, -5, 6],
        [-2, 3, -6],
        [2, 5, 6],
        [3, 5, -6],
        [-1, 3, -6],
        [3, -5, 6],
        [4, 5, 6],
        [1, 2, -3],
    ];
    let clauses = CODES
        .iter()
        .map(|&c| Clause::from_dimacs(c).expect("fixture clauses are well-formed"))
        .collect();
    CnfInstance::new(6, clauses).expect("fixture is well-formed")
}

/// Generates a random 3-SAT instance with `round(ratio * n)` pairwise
/// distinct clauses. Each clause draws 3 distinct variables uniformly and
/// negates each with probability 1/2. Deterministic for a fixed seed.
pub fn generate_instance(num_variables: u32, ratio: f64, seed: u64) -> Result<CnfInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    generate_with_rng(num_variables, ratio, &mut rng)
}

/// Like [`generate_instance`], but retries with fresh draws from the same
/// seeded stream until the instance has exactly one satisfying assignment.
pub fn generate_unique_solution_instance(
    num_variables: u32,
    ratio: f64,
    seed: u64,
    max_attempts: usize,
) -> Result<CnfInstance> {
    if num_variables > DEFAULT_BRUTE_FORCE_CAP {
        return Err(Error::CapExceeded {
            what: "unique-solution filtering needs the exhaustive oracle",
            requested: num_variables,
            cap: DEFAULT_BRUTE_FORCE_CAP,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..max_attempts {
        let instance = generate_with_rng(num_variables, ratio, &mut rng)?;
        if brute_force_solutions(&instance)?.len() == 1 {
            return Ok(instance);
        }
    }
    Err(Error::UniqueSolutionNotFound {
        attempts: max_attempts,
    })
}

fn generate_with_rng(num_variables: u32, ratio: f64, rng: &mut ChaCha8Rng) -> Result<CnfInstance> {
    if num_variables < 3 {
        return Err(Error::TooFewVariables {
            requested: num_variables,
        });
    }
    if !(ratio > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "clause/variable ratio must be positive, got {ratio}"
        )));
    }
    let num_clauses = (ratio * num_variables as f64).round() as usize;
    if num_clauses == 0 {
        return Err(Error::InvalidArgument(format!(
            "ratio {ratio} rounds to zero clauses for n={num_variables}"
        )));
    }
    // 8 sign patterns per unordered variable triple.
    let n = num_variables as usize;
    let triples = n * (n - 1) * (n - 2) / 6;
    let available = triples.saturating_mul(8);
    if num_clauses > available {
        return Err(Error::InfeasibleGeneration {
            num_variables,
            requested_clauses: num_clauses,
            available,
        });
    }

    let mut seen: HashSet<[i32; 3]> = HashSet::with_capacity(num_clauses);
    let mut clauses = Vec::with_capacity(num_clauses);
    while clauses.len() < num_clauses {
        let mut vars = [0u32; 3];
        let mut filled = 0;
        while filled < 3 {
            let v = rng.random_range(1..=num_variables);
            if !vars[..filled].contains(&v) {
                vars[filled] = v;
                filled += 1;
            }
        }
        vars.sort_unstable();
        let mut codes = [0i32; 3];
        for (code, &v) in codes.iter_mut().zip(vars.iter()) {
            let negated: bool = rng.random();
            *code = if negated { -(v as i32) } else { v as i32 };
        }
        if seen.insert(codes) {
            clauses.push(Clause::from_dimacs(codes).expect("variables are distinct"));
        }
    }
    CnfInstance::new(num_variables, clauses)
}

/// Enumerates every assignment and returns exactly those satisfying all
/// clauses, in ascending order. This is the crate's independent oracle: it
/// checks clause satisfaction directly rather than going through the energy
/// function.
pub fn brute_force_solutions(instance: &CnfInstance) -> Result<Vec<Assignment>> {
    brute_force_solutions_capped(instance, DEFAULT_BRUTE_FORCE_CAP)
}

/// [`brute_force_solutions`] with an explicit enumeration cap.
pub fn brute_force_solutions_capped(
    instance: &CnfInstance,
    cap: u32,
) -> Result<Vec<Assignment>> {
    if instance.num_variables() > cap {
        return Err(Error::CapExceeded {
            what: "exhaustive solution enumeration",
            requested: instance.num_variables(),
            cap,
        });
    }
    Ok(instance
        .assignments()
        .filter(|&a| instance.is_satisfied_by(a))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clause(codes: [i32; 3]) -> Clause {
        Clause::from_dimacs(codes).unwrap()
    }

    /// All 8 sign patterns over variables {1,2,3}: every assignment violates
    /// exactly one clause, so the instance is unsatisfiable.
    pub(crate) fn unsat_3() -> CnfInstance {
        let mut clauses = Vec::new();
        for s1 in [1, -1] {
            for s2 in [1, -1] {
                for s3 in [1, -1] {
                    clauses.push(clause([s1, 2 * s2, 3 * s3]));
                }
            }
        }
        CnfInstance::new(3, clauses).unwrap()
    }

    #[test]
    fn literal_evaluation_follows_sign() {
        let a = Assignment::new(0b101, 3);
        assert!(Literal::new(1, false).is_satisfied_by(a));
        assert!(!Literal::new(1, true).is_satisfied_by(a));
        assert!(!Literal::new(2, false).is_satisfied_by(a));
        assert!(Literal::new(2, true).is_satisfied_by(a));
        assert_eq!(Literal::new(2, true).negation(), Literal::new(2, false));
    }

    #[test]
    fn assignment_renders_q1_first() {
        // index 11 = 0b001011 -> q1=1 q2=1 q3=0 q4=1 q5=0 q6=0
        assert_eq!(Assignment::new(11, 6).to_string(), "110100");
    }

    #[test]
    fn clause_rejects_repeated_variable() {
        assert!(Clause::from_dimacs([1, -1, 2]).is_err());
        assert!(Clause::from_dimacs([3, 3, 1]).is_err());
    }

    #[test]
    fn parse_rejects_short_clause() {
        let err = parse_dimacs("p cnf 2 1\n1 -2 0\n").unwrap_err();
        match err {
            Error::Dimacs(DimacsError::ClauseLength { line, len }) => {
                assert_eq!((line, len), (2, 2));
            }
            other => panic!("unexpected error: {other:?}"),
        }
    }

    #[test]
    fn parse_simple_instance() {
        let inst = parse_dimacs("c a comment\np cnf 3 1\n1 -2 3 0\n").unwrap();
        assert_eq!(inst.num_variables(), 3);
        assert_eq!(inst.num_clauses(), 1);
        assert_eq!(inst.clauses()[0], clause([1, -2, 3]));
    }

    #[test]
    fn parse_error_cases_name_their_line() {
        match parse_dimacs("p cnf x 1\n1 2 3 0\n").unwrap_err() {
            Error::Dimacs(DimacsError::MalformedHeader { line, .. }) => assert_eq!(line, 1),
            other => panic!("unexpected: {other:?}"),
        }
        match parse_dimacs("p cnf 3 1\n1 2 4 0\n").unwrap_err() {
            Error::Dimacs(DimacsError::VariableOutOfRange { line, variable, .. }) => {
                assert_eq!((line, variable), (2, 4));
            }
            other => panic!("unexpected: {other:?}"),
        }
        match parse_dimacs("p cnf 3 2\n1 2 3 0\n").unwrap_err() {
            Error::Dimacs(DimacsError::ClauseCountMismatch { declared, found }) => {
                assert_eq!((declared, found), (2, 1));
            }
            other => panic!("unexpected: {other:?}"),
        }
        match parse_dimacs("p cnf 3 1\n1 2 3\n").unwrap_err() {
            Error::Dimacs(DimacsError::MissingTerminator { line }) => assert_eq!(line, 2),
            other => panic!("unexpected: {other:?}"),
        }
        assert!(matches!(
            parse_dimacs("1 2 3 0\n").unwrap_err(),
            Error::Dimacs(DimacsError::MissingHeader)
        ));
    }

    #[test]
    fn dimacs_round_trip_preserves_clause_order() {
        let inst = paper_instance();
        let text = write_dimacs(&inst);
        assert_eq!(parse_dimacs(&text).unwrap(), inst);
    }

    #[test]
    fn paper_instance_shape() {
        let inst = paper_instance();
        assert_eq!(inst.num_variables(), 6);
        assert_eq!(inst.num_clauses(), 27);
        // first clause is (¬x1 ∨ ¬x4 ∨ ¬x5)
        assert_eq!(inst.clauses()[0], clause([-1, -4, -5]));
        // clauses 1 and 18 are the same (present twice in the source listing)
        assert_eq!(inst.clauses()[0], inst.clauses()[17]);
    }

    #[test]
    fn paper_instance_has_unique_solution() {
        let sols = brute_force_solutions(&paper_instance()).unwrap();
        assert_eq!(sols.len(), 1);
        assert_eq!(sols[0].bits(), 11);
        assert_eq!(sols[0].to_string(), "110100");
        // x1=1, x2=1, x3=0, x4=1, x5=0, x6=0
        let expected = [true, true, false, true, false, false];
        for (v, &want) in (1..=6).zip(expected.iter()) {
            assert_eq!(sols[0].value(v), want);
        }
    }

    #[test]
    fn single_clause_has_seven_solutions() {
        let inst = CnfInstance::new(3, vec![clause([1, 2, 3])]).unwrap();
        let sols = brute_force_solutions(&inst).unwrap();
        assert_eq!(sols.len(), 7);
        assert!(sols.iter().all(|a| a.bits() != 0));
    }

    #[test]
    fn unsat_instance_has_no_solutions() {
        assert!(brute_force_solutions(&unsat_3()).unwrap().is_empty());
    }

    #[test]
    fn brute_force_respects_cap() {
        let inst = CnfInstance::new(30, vec![clause([1, 2, 3])]).unwrap();
        assert!(matches!(
            brute_force_solutions(&inst),
            Err(Error::CapExceeded { .. })
        ));
        assert!(brute_force_solutions_capped(&inst, 30).is_ok());
    }

    #[test]
    fn generator_clause_counts_follow_ratio() {
        assert_eq!(generate_instance(6, 4.2, 1).unwrap().num_clauses(), 25);
        assert_eq!(generate_instance(10, 4.2, 1).unwrap().num_clauses(), 42);
    }

    #[test]
    fn generator_is_deterministic() {
        let a = generate_instance(10, 4.2, 77).unwrap();
        let b = generate_instance(10, 4.2, 77).unwrap();
        assert_eq!(a, b);
        let c = generate_instance(10, 4.2, 78).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn generator_clauses_are_distinct_with_distinct_variables() {
        let inst = generate_instance(8, 4.2, 3).unwrap();
        let mut seen = HashSet::new();
        for cl in inst.clauses() {
            let vars: HashSet<u32> = cl.literals().iter().map(|l| l.variable()).collect();
            assert_eq!(vars.len(), 3);
            assert!(seen.insert(*cl), "duplicate clause {cl}");
        }
    }

    #[test]
    fn generator_rejects_tiny_or_infeasible_requests() {
        assert!(matches!(
            generate_instance(2, 4.2, 0),
            Err(Error::TooFewVariables { requested: 2 })
        ));
        // n=3 admits only 8 distinct clauses; ratio 4.2 asks for 13.
        assert!(matches!(
            generate_instance(3, 4.2, 0),
            Err(Error::InfeasibleGeneration { .. })
        ));
        assert!(generate_instance(3, 2.0, 0).is_ok());
    }

    #[test]
    fn unique_solution_filter_finds_single_solution_instance() {
        let inst = generate_unique_solution_instance(6, 4.2, 5, 10_000).unwrap();
        assert_eq!(brute_force_solutions(&inst).unwrap().len(), 1);
        // regenerating with the same seed gives the same instance
        let again = generate_unique_solution_instance(6, 4.2, 5, 10_000).unwrap();
        assert_eq!(inst, again);
    }
}
