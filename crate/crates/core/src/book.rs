// The guide in book/ is plain mdbook. Including each chapter here makes its
// Rust snippets run under `cargo test --doc`.

#[doc = include_str!("../../../book/src/introduction.md")]
mod introduction {}
#[doc = include_str!("../../../book/src/corpus.md")]
mod corpus {}
#[doc = include_str!("../../../book/src/signals.md")]
mod signals {}
#[doc = include_str!("../../../book/src/selection.md")]
mod selection {}
#[doc = include_str!("../../../book/src/gate.md")]
mod gate {}
#[doc = include_str!("../../../book/src/pipeline.md")]
mod pipeline {}
#[doc = include_str!("../../../book/src/cli.md")]
mod cli {}
