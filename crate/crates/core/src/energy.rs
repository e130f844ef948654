//! Clause-violation energies and the exhaustive energy table.
//!
//! The energy of an assignment is its number of unsatisfied clauses, so a
//! satisfying assignment has energy 0 and the table over all `2^n`
//! assignments is the diagonal of the final Hamiltonian. Filling that table
//! is one independent evaluation per assignment, which is what
//! [`energy_table_parallel`] distributes: each worker owns one contiguous
//! output range and writes nothing else, so the result is bit-identical to
//! the serial fill for any worker count.

use std::io::{Read, Write};
use std::ops::Range;

use crate::cnf::{Assignment, Clause, CnfInstance};
use crate::error::{Error, Result};

/// Largest `n` for which full `2^n` tables are built by default
/// (memory-bounded: the table itself is `4 * 2^n` bytes).
pub const DEFAULT_TABLE_CAP: u32 = 28;

/// Unsatisfied-clause counts for every assignment of an instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnergyTable {
    values: Vec<u32>,
    num_variables: u32,
}

impl EnergyTable {
    pub fn num_variables(&self) -> u32 {
        self.num_variables
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, index: usize) -> u32 {
        self.values[index]
    }

    pub fn min_energy(&self) -> u32 {
        *self.values.iter().min().expect("table is never empty")
    }

    /// Number of assignments attaining the minimum energy.
    pub fn ground_degeneracy(&self) -> usize {
        let min = self.min_energy();
        self.values.iter().filter(|&&v| v == min).count()
    }

    /// Indices with energy 0, i.e. the satisfying assignments, ascending.
    pub fn zero_energy_assignments(&self) -> Vec<Assignment> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == 0)
            .map(|(i, _)| Assignment::new(i as u64, self.num_variables))
            .collect()
    }

    /// Binary dump: `n` as little-endian u32, then `2^n` little-endian u32
    /// counts. Intended for cross-run diffing.
    pub fn write_binary<W: Write>(&self, mut writer: W) -> std::io::Result<()> {
        writer.write_all(&self.num_variables.to_le_bytes())?;
        for &v in &self.values {
            writer.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    /// Reads a table written by [`EnergyTable::write_binary`].
    pub fn read_binary<R: Read>(mut reader: R) -> Result<Self> {
        let mut buf = [0u8; 4];
        reader.read_exact(&mut buf)?;
        let num_variables = u32::from_le_bytes(buf);
        if num_variables == 0 || num_variables > DEFAULT_TABLE_CAP {
            return Err(Error::InvalidArgument(format!(
                "table dump declares {num_variables} variables"
            )));
        }
        let len = 1usize << num_variables;
        let mut values = Vec::with_capacity(len);
        for _ in 0..len {
            reader.read_exact(&mut buf)?;
            values.push(u32::from_le_bytes(buf));
        }
        Ok(Self {
            values,
            num_variables,
        })
    }
}

/// Energy contribution of one clause: 0 if satisfied, 1 if violated.
#[inline]
pub fn clause_energy(clause: &Clause, assignment: Assignment) -> u32 {
    u32::from(!clause.is_satisfied_by(assignment))
}

/// Number of clauses of `instance` unsatisfied by `assignment`.
pub fn energy(instance: &CnfInstance, assignment: Assignment) -> Result<u32> {
    if assignment.num_variables() != instance.num_variables() {
        return Err(Error::DimensionMismatch {
            expected: instance.num_variables(),
            actual: assignment.num_variables(),
        });
    }
    Ok(instance
        .clauses()
        .iter()
        .map(|c| clause_energy(c, assignment))
        .sum())
}

/// Per-clause bit masks: a clause is violated exactly when all three of its
/// literals are false, i.e. when the assignment bits restricted to the
/// clause's variables equal one fixed pattern.
fn clause_masks(instance: &CnfInstance) -> Vec<(u64, u64)> {
    instance
        .clauses()
        .iter()
        .map(|clause| {
            let mut mask = 0u64;
            let mut falsifying = 0u64;
            for lit in clause.literals() {
                let bit = 1u64 << (lit.variable() - 1);
                mask |= bit;
                if lit.negated() {
                    falsifying |= bit;
                }
            }
            (mask, falsifying)
        })
        .collect()
}

#[inline]
fn energy_from_masks(masks: &[(u64, u64)], bits: u64) -> u32 {
    masks
        .iter()
        .map(|&(mask, falsifying)| u32::from(bits & mask == falsifying))
        .sum()
}

fn check_table_cap(instance: &CnfInstance) -> Result<()> {
    if instance.num_variables() > DEFAULT_TABLE_CAP {
        return Err(Error::CapExceeded {
            what: "energy table construction",
            requested: instance.num_variables(),
            cap: DEFAULT_TABLE_CAP,
        });
    }
    Ok(())
}

/// Fills the full energy table on a single thread.
pub fn energy_table_serial(instance: &CnfInstance) -> Result<EnergyTable> {
    check_table_cap(instance)?;
    let masks = clause_masks(instance);
    let values = (0..instance.dimension() as u64)
        .map(|bits| energy_from_masks(&masks, bits))
        .collect();
    Ok(EnergyTable {
        values,
        num_variables: instance.num_variables(),
    })
}

/// Fills the full energy table with `num_workers` threads, each evaluating
/// the assignments of one contiguous chunk and writing only into its own
/// slice of the output. Bit-identical to [`energy_table_serial`].
pub fn energy_table_parallel(instance: &CnfInstance, num_workers: usize) -> Result<EnergyTable> {
    if num_workers == 0 {
        return Err(Error::InvalidArgument(
            "at least one worker is required".into(),
        ));
    }
    check_table_cap(instance)?;
    let dimension = instance.dimension();
    let masks = clause_masks(instance);
    let plan = plan_chunks(dimension, num_workers);

    let mut values = vec![0u32; dimension];
    std::thread::scope(|scope| {
        let mut rest: &mut [u32] = &mut values;
        let mut consumed = 0usize;
        for range in plan.ranges() {
            let (chunk, tail) = rest.split_at_mut(range.len());
            rest = tail;
            let start = range.start;
            debug_assert_eq!(start, consumed);
            consumed += range.len();
            let masks = &masks;
            scope.spawn(move || {
                for (offset, slot) in chunk.iter_mut().enumerate() {
                    *slot = energy_from_masks(masks, (start + offset) as u64);
                }
            });
        }
    });
    Ok(EnergyTable {
        values,
        num_variables: instance.num_variables(),
    })
}

/// Disjoint, contiguous, covering split of `[0, total)` into one range per
/// worker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChunkPlan {
    ranges: Vec<Range<usize>>,
}

impl ChunkPlan {
    /// One range per worker; together they cover `[0, total)` exactly.
    pub fn ranges(&self) -> &[Range<usize>] {
        &self.ranges
    }

    pub fn num_workers(&self) -> usize {
        self.ranges.len()
    }
}

/// Splits `total` items into `min(total, num_workers)` contiguous non-empty
/// ranges whose sizes differ by at most 1, larger chunks first.
pub fn plan_chunks(total: usize, num_workers: usize) -> ChunkPlan {
    assert!(total >= 1 && num_workers >= 1);
    let workers = num_workers.min(total);
    let base = total / workers;
    let remainder = total % workers;
    let mut ranges = Vec::with_capacity(workers);
    let mut start = 0usize;
    for i in 0..workers {
        let len = base + usize::from(i < remainder);
        ranges.push(start..start + len);
        start += len;
    }
    debug_assert_eq!(start, total);
    ChunkPlan { ranges }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{brute_force_solutions, generate_instance, paper_instance, Clause};

    fn clause(codes: [i32; 3]) -> Clause {
        Clause::from_dimacs(codes).unwrap()
    }

    #[test]
    fn clause_energy_basic_cases() {
        let c = clause([1, 2, 3]);
        assert_eq!(clause_energy(&c, Assignment::new(0b000, 3)), 1);
        assert_eq!(clause_energy(&c, Assignment::new(0b001, 3)), 0);
        // the fixture's first clause is satisfied by the unique solution
        let first = paper_instance().clauses()[0];
        assert_eq!(clause_energy(&first, Assignment::new(11, 6)), 0);
    }

    #[test]
    fn energy_of_paper_solution_and_origin() {
        let inst = paper_instance();
        assert_eq!(energy(&inst, Assignment::new(11, 6)).unwrap(), 0);
        // all-false assignment violates 4 of the 27 clauses
        assert_eq!(energy(&inst, Assignment::new(0, 6)).unwrap(), 4);
    }

    #[test]
    fn energy_rejects_dimension_mismatch() {
        let inst = paper_instance();
        assert!(matches!(
            energy(&inst, Assignment::new(0, 5)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn serial_table_matches_per_assignment_energy() {
        let inst = paper_instance();
        let table = energy_table_serial(&inst).unwrap();
        assert_eq!(table.len(), 64);
        for a in inst.assignments() {
            assert_eq!(table.value(a.index()), energy(&inst, a).unwrap());
        }
        let zeros = table.zero_energy_assignments();
        assert_eq!(zeros.len(), 1);
        assert_eq!(zeros[0].bits(), 11);
        assert_eq!(table.min_energy(), 0);
        assert_eq!(table.ground_degeneracy(), 1);
        assert_eq!(*table.values().iter().max().unwrap(), 8);
    }

    #[test]
    fn single_clause_table() {
        let inst = CnfInstance::new(3, vec![clause([1, 2, 3])]).unwrap();
        let table = energy_table_serial(&inst).unwrap();
        assert_eq!(table.values(), &[1, 0, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn parallel_equals_serial() {
        let inst = paper_instance();
        let serial = energy_table_serial(&inst).unwrap();
        for workers in [1, 2, 3, 4, 7, 8, 64, 100] {
            assert_eq!(energy_table_parallel(&inst, workers).unwrap(), serial);
        }
        let big = generate_instance(16, 4.2, 9).unwrap();
        let serial = energy_table_serial(&big).unwrap();
        assert_eq!(energy_table_parallel(&big, 8).unwrap(), serial);
    }

    #[test]
    fn parallel_rejects_zero_workers() {
        assert!(energy_table_parallel(&paper_instance(), 0).is_err());
    }

    #[test]
    fn table_cap_enforced() {
        let inst = CnfInstance::new(30, vec![clause([1, 2, 3])]).unwrap();
        assert!(matches!(
            energy_table_serial(&inst),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn zero_set_matches_brute_force() {
        for seed in 0..5 {
            let inst = generate_instance(8, 4.2, seed).unwrap();
            let table = energy_table_serial(&inst).unwrap();
            assert_eq!(
                table.zero_energy_assignments(),
                brute_force_solutions(&inst).unwrap()
            );
        }
    }

    #[test]
    fn appending_a_clause_never_decreases_energies() {
        let inst = generate_instance(6, 3.0, 2).unwrap();
        let before = energy_table_serial(&inst).unwrap();
        let mut clauses = inst.clauses().to_vec();
        clauses.push(clause([-1, -2, -3]));
        let bigger = CnfInstance::new(6, clauses).unwrap();
        let after = energy_table_serial(&bigger).unwrap();
        for (b, a) in before.values().iter().zip(after.values()) {
            assert!(a >= b);
        }
    }

    #[test]
    fn chunk_plans() {
        assert_eq!(plan_chunks(8, 2).ranges(), &[0..4, 4..8]);
        assert_eq!(plan_chunks(7, 2).ranges(), &[0..4, 4..7]);
        let plan = plan_chunks(5, 8);
        assert_eq!(plan.num_workers(), 5);
        assert!(plan.ranges().iter().all(|r| r.len() == 1));
    }

    #[test]
    fn binary_dump_round_trips() {
        let table = energy_table_serial(&paper_instance()).unwrap();
        let mut buf = Vec::new();
        table.write_binary(&mut buf).unwrap();
        assert_eq!(buf.len(), 4 + 4 * 64);
        let back = EnergyTable::read_binary(buf.as_slice()).unwrap();
        assert_eq!(back, table);
    }
}
