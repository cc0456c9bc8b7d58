//! Shared setup for the benchmark targets.

use kp_core::degree::Degree;
use kp_core::graph::{omega_graph, KGraph};
use kp_core::samples;
use std::sync::Arc;

pub fn omega_3x3() -> Arc<KGraph> {
    omega_graph(2, &Degree::from_u64s(&[3, 3])).unwrap()
}

pub fn graph_c() -> Arc<KGraph> {
    samples::graph_c()
}

pub fn deep_bratteli() -> kp_core::bratteli::BratteliGraph {
    let spec = kp_core::bratteli::parse_bratteli_spec(
        "level 0: cycle a1 a2\n\
         level 1: cycle b1 b2 b3\n\
         level 2: cycle c\n\
         blue e1: a1 -> b1, F(e1)=e2\n\
         blue e2: a2 -> b3, F(e2)=e3\n\
         blue e3: a1 -> b2, F(e3)=e4\n\
         blue e4: a2 -> b1, F(e4)=e5\n\
         blue e5: a1 -> b3, F(e5)=e6\n\
         blue e6: a2 -> b2, F(e6)=e1\n\
         blue g1: b1 -> c, F(g1)=g3\n\
         blue g2: b2 -> c, F(g2)=g1\n\
         blue g3: b3 -> c, F(g3)=g2\n",
    )
    .unwrap();
    kp_core::bratteli::build_bratteli(&spec).unwrap()
}
