//! Split orthogonal groups O(2r,R) and O(2r+1,R): vectors and forms,
//! elementary orthogonal transvections and words, the hyperbolic embedding,
//! Vaserstein's mu matrices, and the Theta(r,R) unipotent machinery.

pub mod embed;
pub mod index;
pub mod matrix;
pub mod mu;
pub mod theta;
pub mod transvection;
pub mod vector;

pub use embed::{embed_gl_word, hyperbolic_embed, GlTransvection, GlWord};
pub use index::{OrthoIndex, Parity, Shape};
pub use matrix::{OrthoMatrix, SquareMatrix};
pub use mu::{mu, mu_word};
pub use theta::{solve_theta, solve_theta_with_cofactors, theta_check, ThetaMatrix};
pub use transvection::{Transvection, TransvectionKind, Word};
pub use vector::OrthoVector;
