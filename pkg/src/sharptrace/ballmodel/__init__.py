"""Ball-model machinery: canonical extensions, adapted metrics, energies
and the trace-inequality evaluators."""
