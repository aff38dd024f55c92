//! The circle-in-square classification task on a single qubit whose three
//! gates run in a fixed, classically mixed or coherently superposed order.

mod baseline;
mod dataset;
mod diagnostics;
pub mod fixtures;
mod model;
mod train;

pub use baseline::{re_uploading_baseline, ReUploading, REUPLOAD_PARAMS};
pub use dataset::{
    boundary_grid, class_balance, classify, generate_dataset, true_label, LabeledSample,
};
pub use diagnostics::{ancilla_density, ancilla_probabilities};
pub use model::{
    build_observable, preparation_block, slot_gates, ClassifierModel, ModelParams,
    Observable3Switch, ObservableMode, GATE_PARAMS, PREP_PARAMS,
};
pub use train::{
    accuracy, initial_params, train, train_restarts, Classifier, Objective, RestartSummary,
    TrainConfig, TrainResult, SMOOTH_TEMPERATURE, TEST_SEED_OFFSET,
};
