"""CLI launcher: `factalign-sidecar [--model ID] [--port N] ...`."""

from __future__ import annotations

import argparse

from .app import create_app
from .config import DEFAULT_CLASS_MAP, OVERLAP_MODEL_ID, SidecarConfig, parse_class_map


def build_config(argv=None) -> SidecarConfig:
    parser = argparse.ArgumentParser(description="alignment inference sidecar")
    parser.add_argument(
        "--model",
        default=OVERLAP_MODEL_ID,
        help="transformers checkpoint id, or 'overlap' for the offline model",
    )
    parser.add_argument("--device", default="cpu")
    parser.add_argument("--max-seq-len", type=int, default=512)
    parser.add_argument("--port", type=int, default=8441)
    parser.add_argument("--batch-size", type=int, default=16)
    parser.add_argument("--max-concurrency", type=int, default=4)
    parser.add_argument(
        "--class-map",
        default=",".join(f"{k}={v}" for k, v in DEFAULT_CLASS_MAP.items()),
        help="logit index per class, e.g. aligned=0,neutral=1,contradiction=2",
    )
    args = parser.parse_args(argv)
    return SidecarConfig(
        model_id=args.model,
        device=args.device,
        max_sequence_length=args.max_seq_len,
        port=args.port,
        class_map=parse_class_map(args.class_map),
        batch_size=args.batch_size,
        max_concurrency=args.max_concurrency,
    )


def main(argv=None) -> int:
    import uvicorn

    config = build_config(argv)
    app = create_app(config)
    uvicorn.run(app, host="0.0.0.0", port=config.port, log_level="info")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
