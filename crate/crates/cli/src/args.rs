use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "flymation", version, about = "Visualize aerial-robot trajectories from CSV logs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load a scene and print a JSON summary.
    Validate {
        scene: PathBuf,
    },
    /// Render a still image of the whole scene (PNG or SVG by extension).
    Snapshot(SnapshotArgs),
    /// Render animation frames as numbered PNG files.
    Bake(BakeArgs),
    /// Write the binary scene bundle (manifest.json + blob.bin).
    Bundle {
        scene: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write sampled-pose reference vectors as CSV.
    Goldens {
        scene: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Evenly spaced query instants (knot instants are always added).
        #[arg(long, default_value_t = 64)]
        count: usize,
    },
    /// Serve the bundle and viewer assets over HTTP.
    Serve {
        scene: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Directory with a built viewer; an embedded placeholder page is used otherwise.
        #[arg(long)]
        assets: Option<PathBuf>,
    },
    /// Generate a demo scene folder.
    Demo {
        #[command(subcommand)]
        kind: DemoKind,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Line,
    Timelapse,
}

#[derive(Debug, Args)]
pub struct ViewArgs {
    #[arg(long, default_value_t = 1280)]
    pub width: u32,
    #[arg(long, default_value_t = 720)]
    pub height: u32,
    /// Orbit camera as "azimuth_deg,elevation_deg,radius" around the scene center.
    #[arg(long, conflicts_with = "cam_auto", allow_hyphen_values = true)]
    pub cam: Option<String>,
    /// Frame the scene bounding box automatically (the default).
    #[arg(long)]
    pub cam_auto: bool,
}

#[derive(Debug, Args)]
pub struct SnapshotArgs {
    pub scene: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Defaults to the scene's snapshot_style.
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Time-lapse spacing in seconds (defaults to the scene setting, then range/20).
    #[arg(long)]
    pub interval: Option<f64>,
    /// Simplification tolerance in meters (defaults to the scene's lod_epsilon_m).
    #[arg(long)]
    pub lod: Option<f64>,
    #[command(flatten)]
    pub view: ViewArgs,
}

#[derive(Debug, Args)]
pub struct BakeArgs {
    pub scene: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 30.0)]
    pub fps: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub t0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t1: Option<f64>,
    /// Chase the given trajectory instead of orbiting.
    #[arg(long)]
    pub follow: Option<String>,
    #[command(flatten)]
    pub view: ViewArgs,
}

#[derive(Debug, Subcommand)]
pub enum DemoKind {
    /// Lorenz-attractor butterflies.
    Lorenz {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 10.0)]
        duration: f64,
        #[arg(long, default_value_t = 0.01)]
        dt: f64,
    },
    /// A vehicle lapping a ring of gates.
    Racetrack {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 7)]
        gates: usize,
        #[arg(long, default_value_t = 2)]
        laps: usize,
    },
}
