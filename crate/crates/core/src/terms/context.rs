use super::{Factor, Poly, Word};

/// One nesting level of a context: the factors to the left and right of the
/// hole at that level.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Frame {
    pub left: Vec<Factor>,
    pub right: Vec<Factor>,
}

/// A bracketed word with exactly one hole.
///
/// `frames[0]` is the top level. Each further frame sits inside a bracket
/// occupying the hole position of the frame before it, so the hole is nested
/// `frames.len() - 1` brackets deep.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Context {
    frames: Vec<Frame>,
}

impl Default for Context {
    fn default() -> Self {
        Self::identity()
    }
}

impl Context {
    /// The bare hole.
    pub fn identity() -> Self {
        Context {
            frames: vec![Frame::default()],
        }
    }

    pub fn from_frames(frames: Vec<Frame>) -> Self {
        assert!(!frames.is_empty(), "a context has at least one frame");
        Context { frames }
    }

    /// `left * right` at the top level.
    pub fn sides(left: &Word, right: &Word) -> Self {
        Context::from_frames(vec![Frame {
            left: left.factors().to_vec(),
            right: right.factors().to_vec(),
        }])
    }

    /// `{*}`
    pub fn bracketed() -> Self {
        Context::from_frames(vec![Frame::default(), Frame::default()])
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn is_identity(&self) -> bool {
        self.frames.len() == 1 && self.frames[0].left.is_empty() && self.frames[0].right.is_empty()
    }

    /// Number of brackets enclosing the hole.
    pub fn hole_depth(&self) -> usize {
        self.frames.len() - 1
    }

    /// Replace the hole by `u`.
    pub fn substitute(&self, u: &Word) -> Word {
        if self.is_identity() {
            return u.clone();
        }
        let mut acc = u.clone();
        for (i, frame) in self.frames.iter().enumerate().rev() {
            let mut factors =
                Vec::with_capacity(frame.left.len() + acc.breadth() + frame.right.len());
            factors.extend_from_slice(&frame.left);
            factors.extend_from_slice(acc.factors());
            factors.extend_from_slice(&frame.right);
            acc = Word::from_factors(factors);
            if i > 0 {
                acc = Word::bracket(acc);
            }
        }
        acc
    }

    /// Linear extension of [`Context::substitute`].
    pub fn substitute_poly(&self, s: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (w, c) in s.iter() {
            out.add_term(self.substitute(w), c.clone());
        }
        out
    }

    /// The context `self|_{inner}`: `inner` spliced into the hole of `self`.
    pub fn compose(&self, inner: &Context) -> Context {
        let mut frames = self.frames.clone();
        let last = frames.last_mut().expect("nonempty frames");
        let first = &inner.frames[0];
        let mut left = last.left.clone();
        left.extend_from_slice(&first.left);
        let mut right = first.right.clone();
        right.extend_from_slice(&last.right);
        last.left = left;
        last.right = right;
        frames.extend(inner.frames[1..].iter().cloned());
        Context { frames }
    }
}
