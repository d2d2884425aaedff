//! Color identifiers and finite color sets.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Opaque color identifier. Lists never need more than 2^16 distinct colors.
pub type Color = u16;

/// A finite set of colors, stored sorted and deduplicated.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<Color>", into = "Vec<Color>")]
pub struct ColorSet(Vec<Color>);

impl ColorSet {
    pub fn new() -> Self {
        ColorSet(Vec::new())
    }

    /// The set `{start, start + 1, ..., start + len - 1}`.
    pub fn range(start: Color, len: usize) -> Self {
        ColorSet((0..len).map(|i| start + i as Color).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, c: Color) -> bool {
        self.0.binary_search(&c).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Color> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[Color] {
        &self.0
    }

    pub fn max(&self) -> Option<Color> {
        self.0.last().copied()
    }

    pub fn insert(&mut self, c: Color) -> bool {
        match self.0.binary_search(&c) {
            Ok(_) => false,
            Err(i) => {
                self.0.insert(i, c);
                true
            }
        }
    }

    pub fn is_disjoint(&self, other: &ColorSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn is_subset(&self, other: &ColorSet) -> bool {
        self.0.iter().all(|c| other.contains(*c))
    }

    pub fn union(&self, other: &ColorSet) -> ColorSet {
        self.0.iter().chain(other.0.iter()).copied().collect()
    }

    pub fn intersection(&self, other: &ColorSet) -> ColorSet {
        ColorSet(self.0.iter().copied().filter(|c| other.contains(*c)).collect())
    }

    pub fn difference(&self, other: &ColorSet) -> ColorSet {
        ColorSet(self.0.iter().copied().filter(|c| !other.contains(*c)).collect())
    }

    /// The `k` smallest colors of the set, or `None` if it has fewer than `k`.
    pub fn lowest(&self, k: usize) -> Option<ColorSet> {
        (self.0.len() >= k).then(|| ColorSet(self.0[..k].to_vec()))
    }

    /// All `k`-element subsets in lexicographic order.
    pub fn subsets(&self, k: usize) -> Vec<ColorSet> {
        let n = self.0.len();
        let mut out = Vec::new();
        if k > n {
            return out;
        }
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            out.push(ColorSet(idx.iter().map(|&i| self.0[i]).collect()));
            let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
                return out;
            };
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }

    /// Applies a color relabeling.
    pub fn map(&self, f: impl Fn(Color) -> Color) -> ColorSet {
        self.0.iter().map(|&c| f(c)).collect()
    }
}

impl FromIterator<Color> for ColorSet {
    fn from_iter<I: IntoIterator<Item = Color>>(iter: I) -> Self {
        let mut v: Vec<Color> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        ColorSet(v)
    }
}

impl From<Vec<Color>> for ColorSet {
    fn from(v: Vec<Color>) -> Self {
        v.into_iter().collect()
    }
}

impl From<ColorSet> for Vec<Color> {
    fn from(s: ColorSet) -> Self {
        s.0
    }
}

impl<const N: usize> From<[Color; N]> for ColorSet {
    fn from(v: [Color; N]) -> Self {
        v.into_iter().collect()
    }
}

impl fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_lexicographic() {
        let s = ColorSet::from([1, 2, 3, 4]);
        let subs = s.subsets(2);
        assert_eq!(subs.len(), 6);
        assert_eq!(subs[0], ColorSet::from([1, 2]));
        assert_eq!(subs[5], ColorSet::from([3, 4]));
        assert_eq!(s.subsets(0), vec![ColorSet::new()]);
        assert_eq!(s.subsets(4), vec![s.clone()]);
        assert!(s.subsets(5).is_empty());
    }

    #[test]
    fn set_algebra() {
        let a = ColorSet::from([1, 3, 5]);
        let b = ColorSet::from([3, 4]);
        assert!(!a.is_disjoint(&b));
        assert_eq!(a.difference(&b), ColorSet::from([1, 5]));
        assert_eq!(a.intersection(&b), ColorSet::from([3]));
        assert_eq!(a.union(&b).len(), 4);
        assert_eq!(a.lowest(2), Some(ColorSet::from([1, 3])));
        assert_eq!(b.lowest(3), None);
    }
}
