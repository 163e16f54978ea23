/// Fixed-width bit row indexed by column offset inside a box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct RowBits {
    words: Vec<u64>,
    len: usize,
}

impl RowBits {
    pub(crate) fn new(len: usize) -> Self {
        RowBits {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub(crate) fn get(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub(crate) fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub(crate) fn last_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + 63 - w.leading_zeros() as usize)
    }

    pub(crate) fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + t)
                }
            })
        })
    }

    /// Bit `i` moves to `i + 1`; the top bit falls off.
    pub(crate) fn shl1(&self) -> Self {
        let mut out = RowBits::new(self.len);
        let mut carry = 0;
        for (o, &w) in out.words.iter_mut().zip(&self.words) {
            *o = (w << 1) | carry;
            carry = w >> 63;
        }
        out.trim();
        out
    }

    /// Bit `i` moves to `i - 1`; bit 0 falls off.
    pub(crate) fn shr1(&self) -> Self {
        let mut out = RowBits::new(self.len);
        let n = self.words.len();
        for i in 0..n {
            let hi = if i + 1 < n { self.words[i + 1] << 63 } else { 0 };
            out.words[i] = (self.words[i] >> 1) | hi;
        }
        out
    }

    pub(crate) fn or_with(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    fn trim(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shifts_cross_word_boundaries() {
        let mut b = RowBits::new(130);
        b.set(0);
        b.set(63);
        b.set(64);
        b.set(129);
        let l: Vec<_> = b.shl1().iter_ones().collect();
        assert_eq!(l, vec![1, 64, 65]);
        let r: Vec<_> = b.shr1().iter_ones().collect();
        assert_eq!(r, vec![62, 63, 128]);
        assert_eq!(b.first_one(), Some(0));
        assert_eq!(b.last_one(), Some(129));
        assert!(RowBits::new(5).is_empty());
        assert!(!b.get(130));
    }
}
