//! One TOML file plus `CONSULTRAG_*` environment overrides. Relative paths
//! resolve against the config file's directory.

use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::answer::{ChatProvider, RemoteChatConfig, RemoteChatProvider};
use crate::embedding::{ProviderConfig, ProviderKind};
use crate::index::SharedIndex;
use crate::index::VectorIndex;
use crate::ingest::store::read_records;
use crate::ingest::FetchConfig;
use crate::pipeline::{build_index, Corpus, Engine, EngineSettings, Generator};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("invalid config: {0}")]
    Parse(String),
    #[error("invalid value for {var}: {value}")]
    Env { var: String, value: String },
    #[error("{0}")]
    Startup(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    #[default]
    Extractive,
    RemoteHttp,
}

/// A chat-completions endpoint used for generation or translation.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ChatConfig {
    pub kind: GeneratorKind,
    pub base_url: Option<String>,
    pub model: Option<String>,
    /// Name of the environment variable holding the API key.
    pub api_key_env: Option<String>,
    pub timeout_secs: u64,
    pub max_concurrency: usize,
}

impl Default for ChatConfig {
    fn default() -> Self {
        Self {
            kind: GeneratorKind::Extractive,
            base_url: None,
            model: None,
            api_key_env: None,
            timeout_secs: 60,
            max_concurrency: 4,
        }
    }
}

impl ChatConfig {
    /// `None` for the extractive kind.
    pub fn build(&self) -> Result<Option<Arc<dyn ChatProvider>>, ConfigError> {
        match self.kind {
            GeneratorKind::Extractive => Ok(None),
            GeneratorKind::RemoteHttp => {
                let base_url = self
                    .base_url
                    .clone()
                    .ok_or_else(|| ConfigError::Parse("remote chat provider needs base_url".into()))?;
                let p = RemoteChatProvider::new(RemoteChatConfig {
                    base_url,
                    model: self.model.clone().unwrap_or_default(),
                    api_key: self.api_key_env.as_deref().and_then(|k| std::env::var(k).ok()),
                    timeout: Duration::from_secs(self.timeout_secs),
                    max_concurrency: self.max_concurrency,
                })
                .map_err(|e| ConfigError::Startup(e.to_string()))?;
                Ok(Some(Arc::new(p)))
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct PathsConfig {
    pub corpus: PathBuf,
    /// Prebuilt index; rebuilt from the corpus when absent.
    pub index: Option<PathBuf>,
}

impl Default for PathsConfig {
    fn default() -> Self {
        Self { corpus: PathBuf::from("data/corpus.jsonl"), index: None }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct FetchSection {
    pub base_url: String,
    pub timeout_secs: u64,
    pub parallelism: usize,
    pub page_size: usize,
}

impl Default for FetchSection {
    fn default() -> Self {
        Self {
            base_url: "https://ec.europa.eu/info/law/better-regulation/api".into(),
            timeout_secs: 30,
            parallelism: 4,
            page_size: 50,
        }
    }
}

impl FetchSection {
    pub fn fetch_config(&self) -> FetchConfig {
        FetchConfig {
            base_url: self.base_url.clone(),
            timeout: Duration::from_secs(self.timeout_secs),
            parallelism: self.parallelism.max(1),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ServerConfig {
    pub bind: String,
}

impl Default for ServerConfig {
    fn default() -> Self {
        Self { bind: "127.0.0.1:8080".into() }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct Config {
    pub paths: PathsConfig,
    pub embedding: ProviderConfig,
    pub generation: ChatConfig,
    /// Optional translator for answers whose language differs from the
    /// requested one.
    pub translation: Option<ChatConfig>,
    pub engine: EngineSettings,
    pub fetch: FetchSection,
    pub server: ServerConfig,
}

fn parse<T: std::str::FromStr>(var: &str, value: &str) -> Result<T, ConfigError> {
    value.trim().parse().map_err(|_| ConfigError::Env { var: var.into(), value: value.into() })
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    /// Reads `path` and applies process environment overrides.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.into(), source })?;
        let mut cfg = Self::from_toml(&text)?;
        cfg.resolve_paths(path.parent().unwrap_or(Path::new("")));
        cfg.apply_env(|k| std::env::var(k).ok())?;
        Ok(cfg)
    }

    /// Defaults plus process environment overrides.
    pub fn from_env() -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        cfg.apply_env(|k| std::env::var(k).ok())?;
        Ok(cfg)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.paths.corpus);
        if let Some(p) = self.paths.index.as_mut() {
            fix(p);
        }
    }

    /// Environment values win over file values.
    pub fn apply_env(&mut self, get: impl Fn(&str) -> Option<String>) -> Result<(), ConfigError> {
        macro_rules! set {
            ($var:literal, $v:ident => $body:expr) => {
                if let Some($v) = get($var) {
                    $body;
                }
            };
        }
        set!("CONSULTRAG_CORPUS_PATH", v => self.paths.corpus = v.into());
        set!("CONSULTRAG_INDEX_PATH", v => self.paths.index = Some(v.into()));
        set!("CONSULTRAG_EMBEDDING_KIND", v => self.embedding.kind = match v.trim() {
            "local_deterministic" => ProviderKind::LocalDeterministic,
            "remote_http" => ProviderKind::RemoteHttp,
            _ => return Err(ConfigError::Env { var: "CONSULTRAG_EMBEDDING_KIND".into(), value: v }),
        });
        set!("CONSULTRAG_EMBEDDING_ENDPOINT", v => self.embedding.endpoint = Some(v));
        set!("CONSULTRAG_EMBEDDING_MODEL", v => self.embedding.model = Some(v));
        set!("CONSULTRAG_EMBEDDING_DIM", v => self.embedding.dim = parse("CONSULTRAG_EMBEDDING_DIM", &v)?);
        set!("CONSULTRAG_GENERATION_KIND", v => self.generation.kind = match v.trim() {
            "extractive" => GeneratorKind::Extractive,
            "remote_http" => GeneratorKind::RemoteHttp,
            _ => return Err(ConfigError::Env { var: "CONSULTRAG_GENERATION_KIND".into(), value: v }),
        });
        set!("CONSULTRAG_GENERATION_BASE_URL", v => self.generation.base_url = Some(v));
        set!("CONSULTRAG_GENERATION_MODEL", v => self.generation.model = Some(v));
        set!("CONSULTRAG_K", v => self.engine.default_k = parse("CONSULTRAG_K", &v)?);
        set!("CONSULTRAG_MIN_SCORE", v => self.engine.sufficiency.min_score = parse("CONSULTRAG_MIN_SCORE", &v)?);
        set!("CONSULTRAG_MIN_HITS", v => self.engine.sufficiency.min_hits = parse("CONSULTRAG_MIN_HITS", &v)?);
        set!("CONSULTRAG_COUNTRY_CAP", v => self.engine.diversity.country_cap = parse("CONSULTRAG_COUNTRY_CAP", &v)?);
        set!("CONSULTRAG_TARGET", v => self.engine.diversity.target = parse("CONSULTRAG_TARGET", &v)?);
        set!("CONSULTRAG_FETCH_BASE_URL", v => self.fetch.base_url = v);
        set!("CONSULTRAG_FETCH_TIMEOUT_SECS", v => self.fetch.timeout_secs = parse("CONSULTRAG_FETCH_TIMEOUT_SECS", &v)?);
        set!("CONSULTRAG_FETCH_PARALLELISM", v => self.fetch.parallelism = parse("CONSULTRAG_FETCH_PARALLELISM", &v)?);
        set!("CONSULTRAG_BIND", v => self.server.bind = v);
        self.validate()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let e = self.engine;
        let bad = |m: &str| Err(ConfigError::Parse(m.into()));
        if e.default_k == 0 {
            return bad("engine.default_k must be positive");
        }
        if e.diversity.country_cap == 0 || e.diversity.target == 0 {
            return bad("country_cap and target must be positive");
        }
        if e.sufficiency.min_hits == 0 {
            return bad("min_hits must be positive");
        }
        if self.embedding.dim < 8 || self.embedding.batch_size == 0 {
            return bad("embedding dim must be at least 8 and batch_size positive");
        }
        if self.fetch.parallelism == 0 || self.fetch.page_size == 0 {
            return bad("fetch parallelism and page_size must be positive");
        }
        Ok(())
    }

    /// Forces providers that never touch the network.
    pub fn make_offline(&mut self) {
        if self.embedding.kind != ProviderKind::LocalDeterministic {
            self.embedding.kind = ProviderKind::LocalDeterministic;
            // A stored index came from another provider.
            self.paths.index = None;
        }
        self.generation.kind = GeneratorKind::Extractive;
        self.translation = None;
    }

    /// Loads the corpus and the stored index (or embeds the corpus) and
    /// wires the engine.
    pub async fn build_engine(&self) -> Result<Engine, ConfigError> {
        let startup = |e: &dyn std::fmt::Display| ConfigError::Startup(e.to_string());
        let records = if self.paths.corpus.exists() {
            read_records(&self.paths.corpus).map_err(|e| startup(&e))?
        } else {
            tracing::warn!(path = %self.paths.corpus.display(), "corpus file missing, starting empty");
            Vec::new()
        };
        let corpus = Corpus::new(records);
        let embedder = self.embedding.build().map_err(|e| startup(&e))?;
        let index = match self.paths.index.as_deref().filter(|p| p.exists()) {
            Some(p) => VectorIndex::load(p, Some(embedder.dim())).map_err(|e| startup(&e))?,
            None => build_index(&corpus, embedder.as_ref()).await.map_err(|e| startup(&e))?,
        };
        if let Some(missing) = corpus.records().iter().find(|r| !index.contains(&r.record_id)) {
            return Err(ConfigError::Startup(format!(
                "index is stale: record {} is not indexed; run `index build`",
                missing.record_id
            )));
        }
        // Every record is indexed, so a size difference means extra chunks.
        if index.len() != corpus.len() {
            return Err(ConfigError::Startup(format!(
                "index is stale: it holds {} chunks for {} corpus records; run `index build`",
                index.len(),
                corpus.len()
            )));
        }
        let generator = match self.generation.build()? {
            Some(p) => Generator::Provider(p),
            None => Generator::Extractive,
        };
        let translator = match &self.translation {
            Some(t) => t.build()?,
            None => None,
        };
        Engine::new(Arc::new(corpus), SharedIndex::new(index), embedder, generator, translator, self.engine)
            .map_err(|e| startup(&e))
    }
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use super::*;

    #[test]
    fn defaults_and_file_values() {
        let cfg = Config::from_toml(
            r#"
            [paths]
            corpus = "fixtures/corpus.jsonl"
            [embedding]
            dim = 256
            [engine.sufficiency]
            min_score = 0.3
            [engine.diversity]
            country_cap = 3
            "#,
        )
        .unwrap();
        assert_eq!(cfg.embedding.dim, 256);
        assert_eq!(cfg.embedding.batch_size, 64);
        assert_eq!(cfg.engine.sufficiency.min_score, 0.3);
        assert_eq!(cfg.engine.sufficiency.min_hits, 2);
        assert_eq!(cfg.engine.diversity.country_cap, 3);
        assert_eq!(cfg.engine.diversity.target, 6);
        assert_eq!(cfg.engine.default_k, 8);
        assert_eq!(cfg.fetch.parallelism, 4);
    }

    #[test]
    fn env_wins() {
        let mut cfg = Config::from_toml("[engine]\ndefault_k = 5").unwrap();
        let env: HashMap<&str, &str> =
            [("CONSULTRAG_K", "12"), ("CONSULTRAG_MIN_SCORE", "0.4"), ("CONSULTRAG_GENERATION_KIND", "remote_http")]
                .into();
        cfg.apply_env(|k| env.get(k).map(|v| v.to_string())).unwrap();
        assert_eq!(cfg.engine.default_k, 12);
        assert_eq!(cfg.engine.sufficiency.min_score, 0.4);
        assert_eq!(cfg.generation.kind, GeneratorKind::RemoteHttp);
    }

    #[test]
    fn bad_env_rejected() {
        let mut cfg = Config::default();
        assert!(cfg.apply_env(|k| (k == "CONSULTRAG_K").then(|| "many".to_string())).is_err());
        let mut cfg = Config::default();
        assert!(cfg.apply_env(|k| (k == "CONSULTRAG_K").then(|| "0".to_string())).is_err());
    }

    #[test]
    fn relative_paths_follow_config_dir() {
        let mut cfg = Config::from_toml("[paths]\ncorpus = \"c.jsonl\"\nindex = \"/abs/i.bin\"").unwrap();
        cfg.resolve_paths(Path::new("/etc/app"));
        assert_eq!(cfg.paths.corpus, Path::new("/etc/app/c.jsonl"));
        assert_eq!(cfg.paths.index.as_deref(), Some(Path::new("/abs/i.bin")));
    }

    #[test]
    fn offline_drops_remote_providers() {
        let mut cfg = Config::from_toml(
            "[embedding]\nkind = \"remote_http\"\n[generation]\nkind = \"remote_http\"\n[paths]\nindex = \"i.bin\"",
        )
        .unwrap();
        cfg.make_offline();
        assert_eq!(cfg.embedding.kind, ProviderKind::LocalDeterministic);
        assert_eq!(cfg.generation.kind, GeneratorKind::Extractive);
        assert!(cfg.paths.index.is_none());
    }
}
