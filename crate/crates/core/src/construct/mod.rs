//! Explicit circuit constructions: checkpoint depth reduction of layered
//! branching programs, threshold and induced-subgraph circuits, padded
//! graph properties, and monotone circuits for tractable CSPs.

mod bp;
mod csp_circuit;
mod padding;
mod threshold;

pub use bp::{checkpoint_circuit, BpEdge, Guard, LayeredBp, PathMode};
pub use csp_circuit::{emit_monotone_csp_circuit, MonotoneFragment};
pub use padding::{edge_mask, pad_dummy_inputs, padded_graph_property, GraphPropertyCircuit, Profile, MAX_MASK_VERTICES};
pub use threshold::{
    induced_subgraph_circuit, induced_subgraph_gates, induced_subgraph_oracle, pair_count, pair_index, threshold_circuit,
    threshold_gate, ThresholdMode,
};
