//! Special functions: Euler's dilogarithm, Lobachevsky's function, the polar
//! formula for Im Li₂, and Faddeev's quantum dilogarithm S_γ.
//!
//! All logarithms are principal, with the cut on the negative real axis.

mod dilog;
mod faddeev;
mod lobachevsky;

pub use dilog::li2;
pub use faddeev::{
    contour_integral, f_bar_gamma, f_gamma, faddeev_s, log_faddeev_s, IntegralReport, QdParams,
    Quadrature,
};
pub use lobachevsky::{clausen2, im_li2_polar, lobachevsky, phi_angle, PolarPoint};
