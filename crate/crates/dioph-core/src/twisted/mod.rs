//! Twisted (inhomogeneous) Dirichlet constructions.
