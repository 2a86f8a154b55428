//! Hilbert-order NTILE partitioning.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::model::ElemId;

/// Element → partition pairs, listed in `(hcode, elem_id)` order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionAssignment {
    parts: usize,
    entries: Vec<(ElemId, u32)>,
}

impl PartitionAssignment {
    /// `(elem_id, partition_id)` with partition ids in `1..=n`.
    pub fn entries(&self) -> &[(ElemId, u32)] {
        &self.entries
    }

    pub fn parts(&self) -> usize {
        self.parts
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.parts];
        for &(_, p) in &self.entries {
            sizes[p as usize - 1] += 1;
        }
        sizes
    }

    pub fn as_map(&self) -> HashMap<ElemId, u32> {
        self.entries.iter().copied().collect()
    }
}

/// NTILE bucket (1-based) of the element at 0-based `position` out of `len`.
fn ntile(position: usize, len: usize, n: usize) -> u32 {
    let small = len / n;
    let big_parts = len % n;
    let big_span = big_parts * (small + 1);
    let p = if position < big_span {
        position / (small + 1)
    } else {
        big_parts + (position - big_span) / small
    };
    p as u32 + 1
}

/// Splits the elements, ordered by `(hcode, elem_id)`, into `n` runs whose
/// sizes differ by at most one; the first `len % n` runs get the extra one.
pub fn partition(mesh: &Mesh, n: usize) -> Result<PartitionAssignment> {
    let len = mesh.tet_count();
    if n == 0 || n > len {
        return Err(Error::InvalidArgument(format!(
            "partition count {n} outside 1..={len}"
        )));
    }
    let entries = mesh
        .hcode_index()
        .enumerate()
        .map(|(pos, (_, elem))| (elem, ntile(pos, len, n)))
        .collect();
    Ok(PartitionAssignment { parts: n, entries })
}

/// Number of interior faces whose two elements sit in different partitions.
pub fn cut_faces(mesh: &Mesh, assignment: &HashMap<ElemId, u32>) -> Result<usize> {
    let mut cut = 0;
    for &elem in mesh.elem_ids() {
        for rank in 0..4 {
            let other = mesh.face_neighbor(elem, rank)?;
            // count each shared face once
            if other > elem && assignment.get(&elem) != assignment.get(&other) {
                cut += 1;
            }
        }
    }
    Ok(cut)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ntile_sizes() {
        let sizes = |len: usize, n: usize| {
            let mut s = vec![0; n];
            for pos in 0..len {
                s[ntile(pos, len, n) as usize - 1] += 1;
            }
            s
        };
        assert_eq!(sizes(10, 3), vec![4, 3, 3]);
        assert_eq!(sizes(10, 10), vec![1; 10]);
        assert_eq!(sizes(10, 1), vec![10]);
        assert_eq!(sizes(11, 4), vec![3, 3, 3, 2]);
        for len in 1..60 {
            for n in 1..=len {
                let s = sizes(len, n);
                let (lo, hi) = (s.iter().min().unwrap(), s.iter().max().unwrap());
                assert!(hi - lo <= 1 && *lo >= 1);
                assert_eq!(s.iter().sum::<usize>(), len);
                let mono: Vec<u32> = (0..len).map(|p| ntile(p, len, n)).collect();
                assert!(mono.windows(2).all(|w| w[0] <= w[1]));
            }
        }
    }
}
