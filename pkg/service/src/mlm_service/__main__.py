import argparse

import uvicorn

from .app import create_app
from .config import ServiceConfig


def main(argv=None):
    ap = argparse.ArgumentParser(prog="mlm-service")
    ap.add_argument("--model", default="bert-base-chinese")
    ap.add_argument("--host", default="127.0.0.1")
    ap.add_argument("--port", type=int, default=8900)
    ap.add_argument("--top-k-cap", type=int, default=50)
    ap.add_argument("--detector-checkpoint", default=None)
    args = ap.parse_args(argv)
    config = ServiceConfig(model=args.model, host=args.host, port=args.port,
                           top_k_cap=args.top_k_cap,
                           detector_checkpoint=args.detector_checkpoint)
    uvicorn.run(create_app(config), host=config.host, port=config.port)


if __name__ == "__main__":
    main()
