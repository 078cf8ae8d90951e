//! Flexions, the named moulds, `ganit_v(B)` and the `g_B` word expansion with its
//! decomposition combinatorics.

mod decomp;
mod flexion;
mod ganit;
mod named;

pub use decomp::{decompositions, drop_head, prepend_head, strip_head, Decomposition, DecompositionKind, HeadFilter};
pub use flexion::{
    flex, lower_flex, u_absorb_left, u_absorb_right, u_lower_by_first, u_lower_by_last, upper_flex, Flexion,
};
pub use ganit::{
    g_expand, g_linear, g_recurrence_rhs, g_recurrence_rhs_right, g_via_e, ganit_apply, transfer_rhs, w_term, Ganit,
    InnerShuffle,
};
pub use named::{anti, pari, NamedMould, WordFunction};
