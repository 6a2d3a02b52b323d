/// Mixed-radix codec, most significant digit first.
///
/// Index `i` maps to digits `d` with `i = sum(d[k] * stride[k])`, where
/// `stride[k]` is the product of all radices after position `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedRadix {
    radices: Vec<usize>,
    strides: Vec<usize>,
    size: usize,
}

impl MixedRadix {
    /// Returns `None` when the product of radices overflows `limit`.
    pub fn new(radices: Vec<usize>, limit: usize) -> Option<Self> {
        let mut strides = vec![0; radices.len()];
        let mut acc: usize = 1;
        for k in (0..radices.len()).rev() {
            strides[k] = acc;
            acc = acc.checked_mul(radices[k]).filter(|&v| v <= limit)?;
        }
        Some(Self { radices, strides, size: acc })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn len(&self) -> usize {
        self.radices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radices.is_empty()
    }

    pub fn radices(&self) -> &[usize] {
        &self.radices
    }

    pub fn stride(&self, pos: usize) -> usize {
        self.strides[pos]
    }

    #[inline]
    pub fn digit(&self, index: usize, pos: usize) -> usize {
        (index / self.strides[pos]) % self.radices[pos]
    }

    pub fn encode(&self, digits: &[usize]) -> usize {
        debug_assert_eq!(digits.len(), self.radices.len());
        digits.iter().zip(&self.strides).map(|(d, s)| d * s).sum()
    }

    pub fn decode_into(&self, mut index: usize, out: &mut [usize]) {
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = index / self.strides[k];
            index %= self.strides[k];
        }
    }

    pub fn decode(&self, index: usize) -> Vec<usize> {
        let mut out = vec![0; self.radices.len()];
        self.decode_into(index, &mut out);
        out
    }
}
