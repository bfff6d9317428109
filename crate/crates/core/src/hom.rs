//! Group homomorphisms stored as full image arrays.

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};
use crate::subgroup::Subgroup;

#[derive(Clone)]
pub struct Homomorphism<'a> {
    source: &'a FiniteGroup,
    target: &'a FiniteGroup,
    images: Vec<Elem>,
}

impl std::fmt::Debug for Homomorphism<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Homomorphism({} -> {})",
            self.source.order(),
            self.target.order()
        )
    }
}

impl<'a> Homomorphism<'a> {
    /// Wraps an image array after checking `images[x y] = images[x] images[y]`.
    ///
    /// The check runs over `x` in the source and `y` in a generating set, which is
    /// equivalent to the full check.
    pub fn new(
        source: &'a FiniteGroup,
        target: &'a FiniteGroup,
        images: Vec<Elem>,
    ) -> Result<Self> {
        if images.len() != source.order() {
            return Err(Error::NotAHomomorphism(format!(
                "{} images for a source of order {}",
                images.len(),
                source.order()
            )));
        }
        if let Some(&bad) = images.iter().find(|&&y| y as usize >= target.order()) {
            return Err(Error::NotAHomomorphism(format!(
                "image {bad} outside the target"
            )));
        }
        for &s in source.generating_set() {
            for x in source.elements() {
                let lhs = images[source.mul(x, s) as usize];
                let rhs = target.mul(images[x as usize], images[s as usize]);
                if lhs != rhs {
                    return Err(Error::NotAHomomorphism(format!(
                        "f({} * {}) != f({}) * f({})",
                        source.label(x),
                        source.label(s),
                        source.label(x),
                        source.label(s)
                    )));
                }
            }
        }
        Ok(Homomorphism {
            source,
            target,
            images,
        })
    }

    /// Extends an assignment on generators along the right Cayley graph of `gens`,
    /// then checks the result is a homomorphism.
    pub fn from_generator_images(
        source: &'a FiniteGroup,
        target: &'a FiniteGroup,
        gens: &[Elem],
        gen_images: &[Elem],
    ) -> Result<Self> {
        let images = extend_on_generators(
            source,
            gens,
            gen_images,
            |a, b| target.mul(a, b),
            target.identity(),
        )?;
        Self::new(source, target, images)
    }

    pub fn source(&self) -> &'a FiniteGroup {
        self.source
    }

    pub fn target(&self) -> &'a FiniteGroup {
        self.target
    }

    #[inline]
    pub fn apply(&self, x: Elem) -> Elem {
        self.images[x as usize]
    }

    pub fn images(&self) -> &[Elem] {
        &self.images
    }

    pub fn kernel(&self) -> Subgroup {
        let id = self.target.identity();
        let seeds: Vec<Elem> = self
            .source
            .elements()
            .filter(|&x| self.images[x as usize] == id)
            .collect();
        self.source.subgroup_generated(seeds)
    }

    pub fn image(&self) -> Subgroup {
        self.target
            .subgroup_generated(self.source.generating_set().iter().map(|&s| self.apply(s)))
    }

    pub fn is_surjective(&self) -> bool {
        self.image().order() == self.target.order()
    }
}

/// Propagates generator images to every element by breadth-first search over
/// `x -> x * gens[i]`, reporting the first inconsistency.
pub(crate) fn extend_on_generators(
    source: &FiniteGroup,
    gens: &[Elem],
    gen_images: &[Elem],
    mul: impl Fn(Elem, Elem) -> Elem,
    identity: Elem,
) -> Result<Vec<Elem>> {
    if gens.len() != gen_images.len() {
        return Err(Error::InvalidInput(
            "one image per generator is required".into(),
        ));
    }
    let mut images = vec![u32::MAX; source.order()];
    images[source.identity() as usize] = identity;
    let mut queue = vec![source.identity()];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for (&s, &fs) in gens.iter().zip(gen_images) {
            let y = source.mul(x, s);
            let fy = mul(images[x as usize], fs);
            match images[y as usize] {
                u32::MAX => {
                    images[y as usize] = fy;
                    queue.push(y);
                }
                old if old != fy => {
                    return Err(Error::NotAHomomorphism(format!(
                        "generator images are inconsistent at {}",
                        source.label(y)
                    )))
                }
                _ => {}
            }
        }
    }
    if queue.len() != source.order() {
        return Err(Error::InvalidInput(
            "elements do not generate the group".into(),
        ));
    }
    Ok(images)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_mod_two() {
        let z4 = FiniteGroup::abelian_table(&[4]).unwrap();
        let z2 = FiniteGroup::abelian_table(&[2]).unwrap();
        let f = Homomorphism::from_generator_images(&z4, &z2, &[1], &[1]).unwrap();
        assert_eq!(f.kernel().order(), 2);
        assert!(f.is_surjective());
        assert_eq!(f.apply(3), 1);
    }

    #[test]
    fn inconsistent_images_are_rejected() {
        let z3 = FiniteGroup::abelian_table(&[3]).unwrap();
        let z2 = FiniteGroup::abelian_table(&[2]).unwrap();
        assert!(matches!(
            Homomorphism::from_generator_images(&z3, &z2, &[1], &[1]),
            Err(Error::NotAHomomorphism(_))
        ));
        assert!(Homomorphism::new(&z3, &z2, vec![0, 1, 0]).is_err());
    }
}
