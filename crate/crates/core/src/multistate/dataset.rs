use std::cmp::Ordering;
use std::fmt;

/// A canonical set of evaluations of the input variables.
///
/// Members are stored row-major in one flat vector, sorted lexicographically
/// (declaration order of the inputs) and free of duplicates. A set over zero
/// input variables is either empty or the singleton empty tuple.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DataSet {
    arity: usize,
    len: usize,
    values: Vec<u16>,
}

impl DataSet {
    pub fn empty(arity: usize) -> Self {
        DataSet {
            arity,
            len: 0,
            values: Vec::new(),
        }
    }

    pub fn singleton(member: &[u16]) -> Self {
        DataSet {
            arity: member.len(),
            len: 1,
            values: member.to_vec(),
        }
    }

    /// Builds a set from arbitrary rows, sorting and merging duplicates.
    pub fn from_rows<I, R>(arity: usize, rows: I) -> Self
    where
        I: IntoIterator<Item = R>,
        R: AsRef<[u16]>,
    {
        let mut flat = Vec::new();
        let mut count = 0usize;
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), arity, "evaluation arity mismatch");
            flat.extend_from_slice(r);
            count += 1;
        }
        Self::from_flat(arity, count, flat)
    }

    /// `flat` holds `count` rows of `arity` values each, in any order.
    pub(crate) fn from_flat(arity: usize, count: usize, flat: Vec<u16>) -> Self {
        if arity == 0 {
            return DataSet {
                arity,
                len: usize::from(count > 0),
                values: Vec::new(),
            };
        }
        debug_assert_eq!(flat.len(), arity * count);
        let sorted = flat
            .chunks_exact(arity)
            .zip(flat.chunks_exact(arity).skip(1))
            .all(|(a, b)| a < b);
        if sorted {
            return DataSet {
                arity,
                len: count,
                values: flat,
            };
        }
        let mut rows: Vec<&[u16]> = flat.chunks_exact(arity).collect();
        rows.sort_unstable();
        rows.dedup();
        let len = rows.len();
        let values = rows.concat();
        DataSet { arity, len, values }
    }

    /// Rows already known to be strictly increasing.
    pub(crate) fn from_sorted_flat(arity: usize, count: usize, values: Vec<u16>) -> Self {
        debug_assert!(arity == 0 || values.len() == arity * count);
        DataSet {
            arity,
            len: if arity == 0 { usize::from(count > 0) } else { count },
            values,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_singleton(&self) -> bool {
        self.len == 1
    }

    pub fn member(&self, i: usize) -> &[u16] {
        assert!(i < self.len);
        &self.values[i * self.arity..(i + 1) * self.arity]
    }

    pub fn iter(&self) -> Members<'_> {
        Members { set: self, next: 0 }
    }

    pub fn first(&self) -> Option<&[u16]> {
        (self.len > 0).then(|| self.member(0))
    }

    pub fn contains(&self, member: &[u16]) -> bool {
        self.position(member).is_ok()
    }

    fn position(&self, member: &[u16]) -> Result<usize, usize> {
        if self.arity == 0 {
            return if self.len == 1 { Ok(0) } else { Err(0) };
        }
        let (mut lo, mut hi) = (0, self.len);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.member(mid).cmp(member) {
                Ordering::Less => lo = mid + 1,
                Ordering::Greater => hi = mid,
                Ordering::Equal => return Ok(mid),
            }
        }
        Err(lo)
    }

    pub fn is_subset(&self, other: &DataSet) -> bool {
        self.len <= other.len && self.iter().all(|m| other.contains(m))
    }

    pub fn union(&self, other: &DataSet) -> DataSet {
        assert_eq!(self.arity, other.arity);
        if self.arity == 0 {
            return DataSet::from_sorted_flat(0, self.len.max(other.len), Vec::new());
        }
        let mut out = Vec::with_capacity(self.values.len() + other.values.len());
        let (mut i, mut j) = (0, 0);
        while i < self.len && j < other.len {
            let (a, b) = (self.member(i), other.member(j));
            match a.cmp(b) {
                Ordering::Less => {
                    out.extend_from_slice(a);
                    i += 1;
                }
                Ordering::Greater => {
                    out.extend_from_slice(b);
                    j += 1;
                }
                Ordering::Equal => {
                    out.extend_from_slice(a);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.values[i * self.arity..]);
        out.extend_from_slice(&other.values[j * self.arity..]);
        let count = out.len() / self.arity;
        DataSet::from_sorted_flat(self.arity, count, out)
    }

    pub fn intersection(&self, other: &DataSet) -> DataSet {
        assert_eq!(self.arity, other.arity);
        self.filter(|m| other.contains(m))
    }

    pub fn difference(&self, other: &DataSet) -> DataSet {
        assert_eq!(self.arity, other.arity);
        self.filter(|m| !other.contains(m))
    }

    /// Keeps the members satisfying `keep`; order is preserved.
    pub fn filter(&self, mut keep: impl FnMut(&[u16]) -> bool) -> DataSet {
        let mut out = Vec::new();
        let mut count = 0;
        for m in self.iter() {
            if keep(m) {
                out.extend_from_slice(m);
                count += 1;
            }
        }
        DataSet::from_sorted_flat(self.arity, count, out)
    }

    /// Sorted distinct values of one input variable over all members.
    pub fn projection(&self, var: usize) -> Vec<u16> {
        let mut v: Vec<u16> = self.iter().map(|m| m[var]).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub(crate) fn raw_values(&self) -> &[u16] {
        &self.values
    }
}

impl fmt::Debug for DataSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Members<'a> {
    set: &'a DataSet,
    next: usize,
}

impl<'a> Iterator for Members<'a> {
    type Item = &'a [u16];

    fn next(&mut self) -> Option<&'a [u16]> {
        if self.next >= self.set.len {
            return None;
        }
        let i = self.next;
        self.next += 1;
        let a = self.set.arity;
        Some(&self.set.values[i * a..(i + 1) * a])
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.set.len - self.next;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Members<'_> {}

#[cfg(test)]
mod tests {
    use super::*;

    fn set1(vals: &[u16]) -> DataSet {
        DataSet::from_rows(1, vals.iter().map(|v| [*v]))
    }

    #[test]
    fn rows_are_sorted_and_deduplicated() {
        let s = DataSet::from_rows(2, [[3, 1], [1, 9], [3, 1], [1, 2]]);
        let rows: Vec<_> = s.iter().map(<[u16]>::to_vec).collect();
        assert_eq!(rows, vec![vec![1, 2], vec![1, 9], vec![3, 1]]);
    }

    #[test]
    fn zero_arity_sets() {
        let e = DataSet::from_rows::<_, [u16; 0]>(0, []);
        assert!(e.is_empty());
        let one = DataSet::from_rows(0, [[], []] as [[u16; 0]; 2]);
        assert_eq!(one.len(), 1);
        assert_eq!(one.iter().count(), 1);
        assert!(one.contains(&[]));
        assert_eq!(one.union(&e), one);
    }

    #[test]
    fn union_and_intersection() {
        let a = set1(&[1, 3, 5, 7]);
        let b = set1(&[2, 3, 4, 7, 9]);
        assert_eq!(a.union(&b), set1(&[1, 2, 3, 4, 5, 7, 9]));
        assert_eq!(a.intersection(&b), set1(&[3, 7]));
        assert_eq!(a.difference(&b), set1(&[1, 5]));
        assert!(set1(&[3]).is_subset(&a));
        assert!(!b.is_subset(&a));
    }

    #[test]
    fn projection_of_pairs() {
        let s = DataSet::from_rows(2, [[1, 4], [1, 5], [2, 4]]);
        assert_eq!(s.projection(0), vec![1, 2]);
        assert_eq!(s.projection(1), vec![4, 5]);
    }
}
