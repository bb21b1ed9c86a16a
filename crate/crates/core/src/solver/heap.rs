/// Max-heap of variables ordered by `(tier, activity)`.
#[derive(Default)]
pub(super) struct VarHeap {
    heap: Vec<u32>,
    pos: Vec<usize>,
}

const ABSENT: usize = usize::MAX;

impl VarHeap {
    pub fn with_vars(n: usize) -> Self {
        VarHeap { heap: Vec::with_capacity(n), pos: vec![ABSENT; n] }
    }

    #[inline]
    fn above(a: u32, b: u32, tier: &[u8], act: &[f64]) -> bool {
        let (a, b) = (a as usize, b as usize);
        (tier[a], act[a]) > (tier[b], act[b])
    }

    pub fn contains(&self, v: u32) -> bool {
        self.pos[v as usize] != ABSENT
    }

    pub fn insert(&mut self, v: u32, tier: &[u8], act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.pos[v as usize] = self.heap.len();
        self.heap.push(v);
        self.sift_up(self.heap.len() - 1, tier, act);
    }

    /// Restores order after `v`'s key increased.
    pub fn bumped(&mut self, v: u32, tier: &[u8], act: &[f64]) {
        if let Some(&i) = self.pos.get(v as usize).filter(|&&i| i != ABSENT) {
            self.sift_up(i, tier, act);
        }
    }

    pub fn pop(&mut self, tier: &[u8], act: &[f64]) -> Option<u32> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().expect("nonempty");
        self.pos[top as usize] = ABSENT;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last as usize] = 0;
            self.sift_down(0, tier, act);
        }
        Some(top)
    }

    fn sift_up(&mut self, mut i: usize, tier: &[u8], act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            let p = self.heap[parent];
            if !Self::above(v, p, tier, act) {
                break;
            }
            self.heap[i] = p;
            self.pos[p as usize] = i;
            i = parent;
        }
        self.heap[i] = v;
        self.pos[v as usize] = i;
    }

    fn sift_down(&mut self, mut i: usize, tier: &[u8], act: &[f64]) {
        let v = self.heap[i];
        let len = self.heap.len();
        loop {
            let left = 2 * i + 1;
            if left >= len {
                break;
            }
            let right = left + 1;
            let child = if right < len && Self::above(self.heap[right], self.heap[left], tier, act) {
                right
            } else {
                left
            };
            let c = self.heap[child];
            if !Self::above(c, v, tier, act) {
                break;
            }
            self.heap[i] = c;
            self.pos[c as usize] = i;
            i = child;
        }
        self.heap[i] = v;
        self.pos[v as usize] = i;
    }
}
