"""
Selecting a model and forecasting 2025, 2030, 2035
==================================================

Runs the whole pipeline on the bundled 17-indicator dataset (synthetic values
with India-like magnitudes), prints the metrics and forecast tables and writes
all artifacts to ``demo_output/``.
"""

from trendcast import PipelineConfig, fixture_path, run_pipeline, write_outputs
from trendcast.report import render_forecast_table, render_metrics_table

reports = run_pipeline(PipelineConfig(str(fixture_path())))

# %%
# Selected model per indicator, with its R^2 and RMSE in original units.
print(render_metrics_table(reports))

# %%
# All candidates stay available for auditing.
for r in reports[:3]:
    print(r.series.name)
    for c in r.choice.candidates:
        print(f"  {c.kind.value:<12} R2={c.r_squared:.5f}  RMSE={c.rmse:.4g}")
    for kind, reason in r.choice.skipped:
        print(f"  {kind.value:<12} skipped: {reason}")

# %%
print(render_forecast_table(reports))

# %%
paths = write_outputs(reports, "demo_output")
print(f"wrote {len(paths)} files to demo_output/")
