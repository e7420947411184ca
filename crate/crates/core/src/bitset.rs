/// Fixed-width rows of bits, one row per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitRows {
    words: usize,
    data: Vec<u64>,
}

impl BitRows {
    pub fn new(rows: usize, width: usize) -> BitRows {
        let words = width.div_ceil(64);
        BitRows { words, data: vec![0; rows * words] }
    }

    #[inline]
    pub fn words(&self) -> usize {
        self.words
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize) {
        self.data[r * self.words + c / 64] |= 1 << (c % 64);
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    /// `|row(a) ∧ row(b)|`.
    #[inline]
    pub fn common(&self, a: usize, b: usize) -> u32 {
        self.row(a).iter().zip(self.row(b)).map(|(x, y)| (x & y).count_ones()).sum()
    }
}

/// Iterates the set bit positions of a word slice.
pub fn ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(k, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let t = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(k * 64 + t)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_common() {
        let mut b = BitRows::new(2, 130);
        for c in [0, 63, 64, 129] {
            b.set(0, c);
        }
        b.set(1, 64);
        b.set(1, 5);
        assert!(b.get(0, 129) && !b.get(0, 1));
        assert_eq!(b.common(0, 1), 1);
        assert_eq!(ones(b.row(0)).collect::<Vec<_>>(), vec![0, 63, 64, 129]);
    }
}
