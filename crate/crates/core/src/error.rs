use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("lattice too small: {a_cells}x{b_cells} (both dimensions must be >= 2)")]
    SizeTooSmall { a_cells: usize, b_cells: usize },

    #[error("lattice width must be even so the markers sit at the bottom midpoint, got {0}")]
    OddWidth(usize),

    #[error("threshold must lie strictly inside (0, 1), got {0}")]
    InvalidThreshold(f64),

    #[error("graph is disconnected: spanning tree covers {reached} of {total} vertices")]
    Disconnected { reached: usize, total: usize },

    #[error("vertex {vertex} out of range (graph has {count} vertices)")]
    InvalidVertex { vertex: usize, count: usize },

    #[error("path is empty")]
    EmptyPath,

    #[error("vertex set is empty")]
    EmptySet,

    #[error("instance too large for brute-force enumeration: {vertices} vertices (limit {limit})")]
    InstanceTooLarge { vertices: usize, limit: usize },

    #[error("exploration path requires a honeycomb lattice")]
    NotHoneycomb,

    #[error("boundary coloring is incompatible with an interface starting at s: {0}")]
    IncompatibleColoring(String),

    #[error("point {0} coincides with the pole of the map")]
    Pole(String),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("insufficient statistics: {0}")]
    InsufficientStatistics(String),

    #[error("degenerate fit: {0}")]
    Degenerate(String),

    #[error("path does not cross the domain from bottom to top")]
    NotCrossing,
}

pub type Result<T> = std::result::Result<T, Error>;
