//! Small permutations in image form, used for coset actions.

use serde::Serialize;

/// A permutation of `{0..n-1}`, stored as its image vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm {
            images: (0..n).collect(),
        }
    }

    /// Builds a permutation from images, checking bijectivity.
    pub fn new(images: Vec<usize>) -> Option<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Perm { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Perm { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self` then `other`, as a single permutation.
    pub fn then(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: self.images.iter().map(|&i| other.apply(i)).collect(),
        }
    }

    /// The cycle of `self` through `point`, starting at `point`.
    pub fn cycle_through(&self, point: usize) -> Vec<usize> {
        let mut cycle = vec![point];
        let mut p = self.apply(point);
        while p != point {
            cycle.push(p);
            p = self.apply(p);
        }
        cycle
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_and_invert() {
        let p = Perm::new(vec![1, 2, 0]).unwrap();
        assert_eq!(p.then(&p.inverse()), Perm::identity(3));
        assert_eq!(p.then(&p).apply(0), 2);
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Perm::new(vec![0, 0]).is_none());
        assert!(Perm::new(vec![2, 0]).is_none());
    }

    #[test]
    fn cycles() {
        let p = Perm::new(vec![1, 2, 0, 3]).unwrap();
        assert_eq!(p.cycle_through(0), vec![0, 1, 2]);
        assert_eq!(p.cycle_through(3), vec![3]);
    }
}
