//! Trajectory scenes for aerial robotics: ingest, interpolation, level of
//! detail, cameras, render batches, a deterministic software rasterizer and
//! demo data generators.
//!
//! The math and data model are generic over [`Real`] (`f32` or `f64`); the
//! rasterizer and demo generators work in `f64`.

pub mod camera;
pub mod compile;
pub mod demogen;
pub mod geom;
pub mod ingest;
pub mod model;
pub mod raster;
pub mod real;
pub mod simplify;
pub mod timeline;

pub use real::Real;

pub type Vec3 = geom::Vec3<f64>;
pub type Quat = geom::Quat<f64>;
pub type Mat4 = geom::Mat4<f64>;
pub type Aabb = geom::Aabb<f64>;
pub type ColorRGBA = model::ColorRGBA<f64>;
pub type StateSample = model::StateSample<f64>;
pub type StaticObjectSpec = model::StaticObjectSpec<f64>;
pub type Trajectory = model::Trajectory<f64>;
pub type Scene = model::Scene<f64>;
pub type RenderBatch = compile::RenderBatch<f64>;
pub type CameraMatrices = camera::CameraMatrices<f64>;

pub type Vec3f = geom::Vec3<f32>;
pub type Quatf = geom::Quat<f32>;
pub type Scenef = model::Scene<f32>;
