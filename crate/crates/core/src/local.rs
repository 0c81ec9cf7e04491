//! Exact local symbols for the biquadratic algebra: place models at odd
//! primes, the eight dyadic square-class engines, archimedean signs, and the
//! global screening test (the conductor of a pair of units) built from them.

mod dyadic;
mod odd;
mod real;
mod screen;

pub use dyadic::{
    hilbert_qp2, q2_class, q2_sqrt, q2_square, DyadicContext, DyadicField, LocalSquareClass,
};
pub use odd::{
    etale_odd_places, quad_odd_places, relevant_odd_primes, tame_symbol, EPlace, QuadPlace,
};
pub use real::{etale_embedding_signs, etale_real_symbols, quad_real_symbols};
pub use screen::{
    cup_symbols_over_e, quad_relevant_places, quad_symbol_product, quad_symbols_above,
    EtaleSymbolReport, PlaceSymbol,
};
