//! Binding bigraphs and their encoding as nets of a free symmetric
//! monoidal closed category.

pub mod bigraph;
pub mod canon;
pub mod format;
pub mod formula;
pub mod net;
pub mod theory;
pub mod translate;
pub mod unionfind;
