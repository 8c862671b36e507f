use std::path::PathBuf;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    /// Level or period.
    pub k: u32,
    pub depth: u32,
    /// Deck translates `n` with `|n_i| <= window` are drawn.
    pub window: u32,
    pub norm: String,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub budget: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            k: 1,
            depth: homdyn::semiconj::DEFAULT_SHADOW_DEPTH,
            window: 1,
            norm: "adapted".into(),
            format: Format::Json,
            out: None,
            svg: None,
            budget: None,
        }
    }
}
