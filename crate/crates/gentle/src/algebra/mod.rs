//! Concrete based algebras: the skew-gentle algebra `A`, its normalization
//! `H`, the resolution algebra `B`, and minimal projective resolutions.

mod based;
mod build;
mod resolution;

pub use based::{BasedAlgebra, BasisElem, BasisSpec, Element, Unit, VertexInfo};
pub use build::{
    embedding, fat_point, gentle_algebra, glued_algebra, info, normalization, radical_matches,
    resolution_algebra, slot_of, vertex_of_slot, AlgebraInfo, Block, ResolutionAlgebra,
};
pub use resolution::{global_dimension_probe, simple_resolution, Resolution};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::fixtures::*;
    use crate::datum::Datum;
    use crate::scalar::{Fp, Rational};

    #[test]
    fn golden_dimensions() {
        assert_eq!(gentle_algebra(&dual_numbers()).dim(), 2);
        assert_eq!(gentle_algebra(&two_cycle()).dim(), 5);
        assert_eq!(gentle_algebra(&two_paths()).dim(), 9);
        assert_eq!(normalization(&Datum::new(vec![3], &[]).unwrap()).dim(), 6);
        let h = normalization(&dual_numbers());
        assert_eq!((h.dim(), h.radical_basis().len()), (3, 1));
        // T_{3,{2}} is 4×4 lower triangular plus the upper corner of its 2×2 middle block
        assert_eq!(normalization(&skew_tubular()).dim(), 22);
    }

    #[test]
    fn dimension_formula_for_gentle_corpus() {
        for d in Datum::enumerate_gentle(2, &[2, 3]) {
            let a = gentle_algebra(&d);
            let expect: usize =
                d.lengths().iter().map(|m| m * (m + 1) / 2).sum::<usize>() - d.relations().len();
            assert_eq!(a.dim(), expect, "{d}");
            a.check_axioms().unwrap();
            let total: usize = (0..a.vertex_count()).map(|v| a.projective_basis(v).len()).sum();
            assert_eq!(total, a.dim());
            assert!(radical_matches::<Rational>(&a, &a.radical_basis()).unwrap());
        }
    }

    #[test]
    fn skew_algebra_is_consistent() {
        let d = skew_tubular();
        let a = gentle_algebra(&d);
        a.check_axioms().unwrap();
        assert_eq!(a.vertex_count(), 6);
        assert!(radical_matches::<Rational>(&a, &a.radical_basis()).unwrap());
        let h = normalization(&d);
        h.check_axioms().unwrap();
        assert!(!h.is_basic());
        assert!(radical_matches::<Rational>(&h, &h.radical_basis()).unwrap());
    }

    #[test]
    fn resolution_algebra_dims_and_radical() {
        let b = resolution_algebra(&dual_numbers());
        assert_eq!(b.alg.dim(), 9);
        assert_eq!(b.block_dims(), [2, 3, 1, 3]);
        let b = resolution_algebra(&two_paths());
        assert_eq!(b.block_dims(), [9, 12, 6, 12]);
        assert_eq!(b.alg.dim(), 39);
        for (_, d) in gentle_corpus() {
            let b = resolution_algebra(&d);
            b.alg.check_axioms().unwrap();
            assert!(b.witness.is_gentle());
            assert!(b.witness_matches());
            assert!(radical_matches::<Rational>(&b.alg, &b.l_span()).unwrap());
        }
        let b = resolution_algebra(&skew_tubular());
        b.alg.check_axioms().unwrap();
        assert!(b.witness_matches());
    }

    #[test]
    fn hom_spaces_in_two_paths() {
        let a = gentle_algebra(&two_paths());
        let (p1, p3) = (0, 2);
        // the two length-two paths
        assert_eq!(a.hom_basis(p3, p1).len(), 2);
        assert_eq!(a.hom_basis(p1, p3).len(), 0);
        for v in 0..3 {
            assert_eq!(a.hom_basis(v, v).len(), 1);
        }
    }

    #[test]
    fn quiver_of_dual_numbers() {
        let a = gentle_algebra(&dual_numbers());
        let arrows = a.arrows();
        assert_eq!(arrows.len(), 1);
        assert_eq!(a.basis_elem(arrows[0]).label, "(1,2,1)");
        let dot = a.to_dot();
        assert!(dot.contains("\"g1\" -> \"g1\" [label=\"(1,2,1)\"]"));
    }

    #[test]
    fn fat_point_shape() {
        for n in 1..=3 {
            let (a, h) = fat_point(n).unwrap();
            assert_eq!(a.dim(), n + 1);
            assert_eq!(h.dim(), 3 * n);
            a.check_axioms().unwrap();
            assert!(radical_matches::<Fp<1_000_003>>(&a, &a.radical_basis()).unwrap());
        }
    }
}
