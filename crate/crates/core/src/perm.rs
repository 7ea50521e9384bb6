//! Permutations of `{0, .., n-1}` acting on the right.

use std::fmt;

use crate::alphabet::{Alphabet, Letter, Word};
use crate::error::{GscError, Result};

/// A permutation stored as its image list. Composition is left to right:
/// `x · (p.then(q)) = (x · p) · q`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(GscError::Schema {
                    path: String::new(),
                    message: format!("{images:?} is not a permutation"),
                });
            }
            seen[x] = true;
        }
        Ok(Perm(images))
    }

    /// Permutation with the given disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[u32]]) -> Self {
        let mut images: Vec<u32> = (0..n as u32).collect();
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                images[x as usize] = cycle[(i + 1) % cycle.len()];
            }
        }
        Perm(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    /// In-place `self = self.then(other)`.
    pub fn then_assign(&mut self, other: &Perm) {
        for x in self.0.iter_mut() {
            *x = other.0[*x as usize];
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// Cycle lengths in decreasing order, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut lengths = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.0[x] as usize;
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths
    }

    pub fn order(&self) -> usize {
        fn gcd(a: usize, b: usize) -> usize {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        self.cycle_type()
            .into_iter()
            .fold(1, |acc, l| acc / gcd(acc, l) * l)
    }

    /// Canonical representative of the conjugacy class with the given cycle
    /// type: cycles on consecutive points, longest first.
    pub fn canonical_of_type(n: usize, cycle_type: &[usize]) -> Perm {
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut start = 0;
        for &len in cycle_type {
            for i in 0..len {
                images[start + i] = (start + (i + 1) % len) as u32;
            }
            start += len;
        }
        Perm(images)
    }

    /// Advances to the next permutation in lexicographic order of image
    /// lists; returns false after the last one.
    pub fn next_lex(&mut self) -> bool {
        let v = &mut self.0;
        if v.len() < 2 {
            return false;
        }
        let mut i = v.len() - 1;
        while i > 0 && v[i - 1] >= v[i] {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        let mut j = v.len() - 1;
        while v[j] <= v[i - 1] {
            j -= 1;
        }
        v.swap(i - 1, j);
        v[i..].reverse();
        true
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// All partitions of `n` in decreasing-part order.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=max.min(n)).rev() {
            prefix.push(part);
            go(n - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// An assignment of permutations of `n` points to the generators; inverse
/// letters act by inverse permutations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LetterAction {
    degree: usize,
    /// Indexed by [`Letter::code`]: generator images and their inverses.
    images: Vec<Perm>,
}

impl LetterAction {
    pub fn new(degree: usize, generator_images: Vec<Perm>) -> Result<Self> {
        let mut images = Vec::with_capacity(2 * generator_images.len());
        for (i, p) in generator_images.into_iter().enumerate() {
            if p.degree() != degree {
                return Err(GscError::Schema {
                    path: format!("/images/{i}"),
                    message: format!("expected a permutation of {degree} points"),
                });
            }
            images.push(p.inverse());
            images.push(p);
            let last = images.len() - 1;
            images.swap(last - 1, last);
        }
        Ok(LetterAction { degree, images })
    }

    /// Builds an action from per-letter images where inverse letters may also
    /// be given; they must agree with the inverse permutation.
    pub fn from_letter_images(
        alphabet: &Alphabet,
        degree: usize,
        images: &[(Letter, Perm)],
    ) -> Result<Self> {
        let mut gens: Vec<Option<Perm>> = vec![None; alphabet.len()];
        for (l, p) in images.iter().filter(|(l, _)| !l.is_inverse()) {
            gens[l.index()] = Some(p.clone());
        }
        for (l, p) in images.iter().filter(|(l, _)| l.is_inverse()) {
            let inv = p.inverse();
            match &gens[l.index()] {
                Some(g) if *g != inv => {
                    return Err(GscError::InverseMismatch {
                        letter: alphabet.letter_name(*l),
                    })
                }
                Some(_) => {}
                None => gens[l.index()] = Some(inv),
            }
        }
        let gens = gens
            .into_iter()
            .map(|g| g.unwrap_or_else(|| Perm::identity(degree)))
            .collect();
        Self::new(degree, gens)
    }

    pub fn trivial(degree: usize, generators: usize) -> Self {
        Self::new(degree, vec![Perm::identity(degree); generators]).expect("identity has the right degree")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generator_count(&self) -> usize {
        self.images.len() / 2
    }

    pub fn image(&self, letter: Letter) -> &Perm {
        &self.images[letter.code()]
    }

    pub fn generator_images(&self) -> Vec<Perm> {
        self.images.iter().step_by(2).cloned().collect()
    }

    pub fn eval(&self, word: &Word) -> Perm {
        let mut p = Perm::identity(self.degree);
        for &l in word {
            p.then_assign(self.image(l));
        }
        p
    }

    /// Point reached from `x` by reading `word`.
    pub fn trace(&self, x: usize, word: &Word) -> usize {
        word.iter().fold(x, |x, &l| self.image(l).apply(x))
    }

    /// Side-by-side action on `self.degree + other.degree` points.
    pub fn direct_sum(&self, other: &LetterAction) -> LetterAction {
        let n = self.degree + other.degree;
        let gens = self
            .generator_images()
            .into_iter()
            .zip(other.generator_images())
            .map(|(p, q)| {
                let mut images: Vec<u32> = p.images().to_vec();
                images.extend(q.images().iter().map(|&x| x + self.degree as u32));
                Perm(images)
            })
            .collect();
        LetterAction::new(n, gens).expect("degrees add up")
    }

    /// The permutation group generated by the images, as a list of elements
    /// in breadth-first (shortlex) order starting from the identity. `None`
    /// if the order exceeds `limit`.
    pub fn closure(&self, limit: usize) -> Option<Vec<Perm>> {
        let mut elements = vec![Perm::identity(self.degree)];
        let mut seen: std::collections::HashMap<Perm, usize> = std::collections::HashMap::new();
        seen.insert(elements[0].clone(), 0);
        let mut i = 0;
        while i < elements.len() {
            for img in &self.images {
                let next = elements[i].then(img);
                if !seen.contains_key(&next) {
                    if elements.len() >= limit {
                        return None;
                    }
                    seen.insert(next.clone(), elements.len());
                    elements.push(next);
                }
            }
            i += 1;
        }
        Some(elements)
    }

    /// Right regular action of the generated group on its own elements.
    pub fn regular(&self, limit: usize) -> Option<LetterAction> {
        let elements = self.closure(limit)?;
        let index: std::collections::HashMap<&Perm, u32> =
            elements.iter().enumerate().map(|(i, p)| (p, i as u32)).collect();
        let gens = self
            .generator_images()
            .iter()
            .map(|g| Perm(elements.iter().map(|e| index[&e.then(g)]).collect()))
            .collect();
        Some(LetterAction::new(elements.len(), gens).expect("regular degree"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_is_left_to_right() {
        let p = Perm::from_cycles(3, &[&[0, 1]]);
        let q = Perm::from_cycles(3, &[&[1, 2]]);
        // 0 -p-> 1 -q-> 2
        assert_eq!(p.then(&q).apply(0), 2);
        assert!(p.then(&p.inverse()).is_identity());
    }

    #[test]
    fn orders_and_types() {
        let p = Perm::from_cycles(5, &[&[0, 1], &[2, 3, 4]]);
        assert_eq!(p.order(), 6);
        assert_eq!(p.cycle_type(), vec![3, 2]);
        assert_eq!(Perm::canonical_of_type(5, &[3, 2]).cycle_type(), vec![3, 2]);
        assert_eq!(partitions(5).len(), 7);
        assert_eq!(partitions(8).len(), 22);
    }

    #[test]
    fn lex_enumeration_covers_sym_n() {
        let mut p = Perm::identity(4);
        let mut count = 1;
        while p.next_lex() {
            count += 1;
        }
        assert_eq!(count, 24);
    }

    #[test]
    fn inverse_consistency() {
        let s = Alphabet::new(["a"]).unwrap();
        let a = Perm::from_cycles(3, &[&[0, 1, 2]]);
        let ok = LetterAction::from_letter_images(
            &s,
            3,
            &[(Letter::generator(0), a.clone()), (Letter::new(0, true), a.inverse())],
        );
        assert!(ok.is_ok());
        let bad = LetterAction::from_letter_images(
            &s,
            3,
            &[(Letter::generator(0), a.clone()), (Letter::new(0, true), a.clone())],
        );
        assert!(matches!(bad, Err(GscError::InverseMismatch { .. })));
    }

    #[test]
    fn sym3_closure_and_regular_action() {
        let t1 = Perm::from_cycles(3, &[&[0, 1]]);
        let t2 = Perm::from_cycles(3, &[&[1, 2]]);
        let act = LetterAction::new(3, vec![t1, t2]).unwrap();
        assert_eq!(act.closure(100).unwrap().len(), 6);
        let reg = act.regular(100).unwrap();
        assert_eq!(reg.degree(), 6);
        assert!(act.closure(5).is_none());
    }
}
