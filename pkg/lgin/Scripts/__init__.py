# library modules: model, curves, equilibria, dynamics
# plumbing: common, parse, command_handlers, summary_utils, validation_utils, rich_formatting
