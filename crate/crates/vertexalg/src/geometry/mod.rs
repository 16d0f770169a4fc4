//! Chart geometry: the antiinvolution η, transition operators between
//! charts of projective space, the loop-algebra embedding, affine sl_{N+1}
//! actions, global sections, Čech–BRST cohomology, and character tables.

pub mod eta;
pub mod loops;
pub mod sections;
pub mod transition;

pub use eta::{eta_generator_mode, eval_eta_mode, ModeMonomial};
pub use loops::{
    check_loop_hom, pi_hat_field, sl_action_field, sl_vector_field, vertex_operator_eij,
    VectorField,
};
pub use sections::{cech_q_cohomology, character_compare, global_sections, CharacterTable};
pub use transition::{Atlas, Space, TransitionOp};
