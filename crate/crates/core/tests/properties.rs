//! Property tests over the generators and the file format.

use plancon::cuts::min_cut_value;
use plancon::instances::{self, KecShape, ParsedInstance};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Face-walk totality: every half-edge lies in exactly one face walk.
    #[test]
    fn face_walks_cover_half_edges(n in 4u32..14, k in 2u64..4, seed in 0u64..1000) {
        let inst = instances::gen_planar_kec(n, k, seed, 3, KecShape::Compact);
        let total: usize = inst.graph.faces().iter().map(|w| w.len()).sum();
        prop_assert_eq!(total, 2 * inst.graph.edges().len());
    }

    /// Instance files round-trip structurally.
    #[test]
    fn instance_files_round_trip(n in 4u32..12, seed in 0u64..1000) {
        let inst = instances::gen_planar_kec(n, 2, seed, 3, KecShape::Compact);
        let value = instances::write_instance_value(&ParsedInstance::Wecss(inst.clone()));
        let parsed = instances::parse_instance_str(&value.to_string()).unwrap();
        match parsed {
            ParsedInstance::Wecss(w) => {
                prop_assert_eq!(w.graph.edges(), inst.graph.edges());
                prop_assert_eq!(w.graph.rotation(), inst.graph.rotation());
                prop_assert_eq!(w.costs, inst.costs);
                prop_assert_eq!(w.k, inst.k);
            }
            _ => prop_assert!(false, "expected a spanning-subgraph instance"),
        }
    }

    /// Declared connectivity holds for every generated instance.
    #[test]
    fn generated_min_cut_matches_k(n in 5u32..12, k in 2u64..4, seed in 0u64..1000) {
        let inst = instances::gen_planar_kec(n, k, seed, 3, KecShape::Compact);
        prop_assert_eq!(min_cut_value(&inst.graph.as_multigraph()).unwrap(), k);
    }

    /// Augmentation generators always produce feasible instances.
    #[test]
    fn cap_instances_feasible(n in 5u32..11, k in 2u64..4, seed in 0u64..1000) {
        let inst = instances::gen_cap_instance(n, k, seed, 3, 5);
        prop_assert!(plancon::cuts::is_k_edge_connected(
            &inst.graph.as_multigraph(),
            k + 1
        ));
    }
}
