pub mod density;
pub mod polytable;
pub mod spectrum;
pub mod verify;
pub mod wavefunction;

/// State shared by every command.
pub struct Context {
    /// `config: key = value` lines for the CSV headers.
    pub echo: Vec<String>,
}
