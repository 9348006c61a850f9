#[allow(unused_imports)]
pub(crate) use alloc::{borrow::ToOwned, boxed::Box, format, string::String, vec, vec::Vec};
#[allow(unused_imports)]
pub(crate) use num_traits::Float;
