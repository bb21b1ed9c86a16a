use super::{Color, EdgeColoring, GraphError};

/// Assignment to the distance variables `z_1 ..= z_{n-1}`.
///
/// Expanded, edge `(i, j)` gets Color One iff `z_{j-i}` is true.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ZVector {
    n: usize,
    bits: Vec<Option<bool>>,
    symmetric: bool,
}

impl ZVector {
    pub fn unassigned(n: usize) -> Self {
        ZVector { n, bits: vec![None; n.saturating_sub(1)], symmetric: false }
    }

    /// Fully assigned vector; `bits[k - 1]` is `z_k`.
    pub fn from_bits(bits: &[bool]) -> Self {
        ZVector {
            n: bits.len() + 1,
            bits: bits.iter().map(|&b| Some(b)).collect(),
            symmetric: false,
        }
    }

    /// Parses the `{0,1}^(n-1)` witness line format.
    pub fn parse(line: &str) -> Result<Self, String> {
        let bits = line
            .trim()
            .chars()
            .map(|c| match c {
                '1' => Ok(true),
                '0' => Ok(false),
                other => Err(format!("unexpected character {other:?} in z-vector")),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ZVector::from_bits(&bits))
    }

    /// Marks the vector as carrying the mirror constraint `z_{n-k} = z_k`.
    pub fn into_symmetric(mut self) -> Result<Self, GraphError> {
        for k in 1..self.n {
            let mirror = self.n - k;
            if let (Some(a), Some(b)) = (self.get(k), self.get(mirror)) {
                if a != b {
                    return Err(GraphError::ZAsymmetric { k, mirror });
                }
            }
        }
        self.symmetric = true;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// `z_k`, for `1 <= k < n`.
    pub fn get(&self, k: usize) -> Option<bool> {
        self.bits[k - 1]
    }

    /// Sets `z_k`; in symmetric mode the mirror entry follows.
    pub fn set(&mut self, k: usize, value: Option<bool>) {
        self.bits[k - 1] = value;
        if self.symmetric {
            self.bits[self.n - k - 1] = value;
        }
    }

    pub fn is_complete(&self) -> bool {
        self.bits.iter().all(Option::is_some)
    }

    /// Bitwise negation; maps (s,t)-circulants to (t,s)-circulants.
    pub fn negated(&self) -> ZVector {
        ZVector {
            n: self.n,
            bits: self.bits.iter().map(|b| b.map(|v| !v)).collect(),
            symmetric: self.symmetric,
        }
    }

    /// The circulant coloring the vector describes.
    pub fn to_coloring(&self) -> Result<EdgeColoring, GraphError> {
        if let Some(k) = self.bits.iter().position(Option::is_none) {
            return Err(GraphError::UnassignedZ { k: k + 1 });
        }
        EdgeColoring::from_fn(self.n, |i, j| self.bits[j - i - 1].map(Color::from_bool))
    }

    /// `{0,1}` string, `?` for unassigned entries.
    pub fn to_bit_string(&self) -> String {
        self.bits
            .iter()
            .map(|b| match b {
                Some(true) => '1',
                Some(false) => '0',
                None => '?',
            })
            .collect()
    }
}

/// Expands a complete z-vector into its circulant coloring.
pub fn coloring_from_z(z: &ZVector) -> Result<EdgeColoring, GraphError> {
    z.to_coloring()
}
