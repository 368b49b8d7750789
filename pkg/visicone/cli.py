#!/usr/bin/env python3
"""
visicone command line front end.

Reads one JSON problem file per call, dispatches it to the projection or
visibility routines and writes a result document (JSON, or CSV for sample)
to stdout or --output. `check-example24` and `verify` run the property suites.

Exit codes: 0 success, 1 malformed input or violated precondition,
2 numerical failure, 3 property suite failure, 130 interrupted.
"""

import argparse
import logging
import logging.config
import sys
from contextlib import contextmanager

from visicone.config import CLI_DEFAULTS, LOGGING_CONFIG, TOLERANCES
from visicone.documents import load_problem, write_document, write_samples
from visicone.errors import GeometryError, InputError, NumericalError, ProblemFormatError, SuiteFailure
from visicone.projection import project
from visicone.suites import build_suites, run_suites
from visicone.suites.witness_suites import DiskConeSuite
from visicone.visibility import (
    argmax_on_segment,
    is_visible,
    raycast_visible,
    sample_visible,
    separate_segment,
)

logger = logging.getLogger(__name__)

QUERY_COMMANDS = ('project', 'visible', 'raycast', 'sample', 'separate')


class VisiconeRunner:
    """Runs one command line request"""

    def __init__(self, tol=None, vis_tol=None, seed=None, output=None):
        self.tol = TOLERANCES['membership'] if tol is None else tol
        self.vis_tol = TOLERANCES['visibility'] if vis_tol is None else vis_tol
        self.seed = CLI_DEFAULTS['seed'] if seed is None else seed
        self.output = output

    @contextmanager
    def _stream(self):
        if self.output:
            with open(self.output, 'w', encoding='utf-8', newline='') as f:
                yield f
            logger.info(f"Results saved to {self.output}")
        else:
            yield sys.stdout

    def solve(self, command, input_path):
        """Load a problem file and answer its query with the matching subcommand"""
        problem = load_problem(input_path)
        if problem.kind != command:
            raise ProblemFormatError('query', f"expected a {command!r} query, found {problem.kind!r}")
        logger.info(f"Solving {command} query on a {problem.body.tag} in dimension {problem.dim}")
        handler = getattr(self, f"_{command}")
        return handler(problem.body, problem.query)

    def _project(self, body, query):
        result = project(body, query['point'])
        document = {
            'query': 'project',
            'body': body.tag,
            'point': result.point,
            'distance': result.distance,
            'weights': result.weights,
            'facet_chain': list(result.facet_chain),
        }
        self._emit(document)
        return document

    def _visible(self, body, query):
        cert = is_visible(body, query['from'], query['candidate'], self.vis_tol, self.tol)
        document = {'query': 'visible', 'body': body.tag, **cert.to_dict()}
        self._emit(document)
        return document

    def _raycast(self, body, query):
        point = raycast_visible(body, query['from'], query['toward'], self.tol)
        document = {'query': 'raycast', 'body': body.tag, 'point': point}
        self._emit(document)
        return document

    def _separate(self, body, query):
        cert = separate_segment(body, query['x'], query['y'])
        document = {
            'query': 'separate',
            'body': body.tag,
            **cert.to_dict(),
            'argmax': argmax_on_segment(cert, query['x'], query['y']),
        }
        self._emit(document)
        return document

    def _sample(self, body, query):
        seed = self.seed if query['seed'] is None else query['seed']
        x = query['from']
        points = sample_visible(body, x, query['count'], seed)
        lambdas = [is_visible(body, x, v, self.vis_tol, self.tol).lambda_star for v in points]
        with self._stream() as stream:
            write_samples(points, lambdas, body.dim, stream)
        logger.info(f"Sampled {len(points)} visible points with seed {seed}")
        return points

    def _emit(self, document):
        with self._stream() as stream:
            write_document(document, stream)

    def check_example24(self):
        report = DiskConeSuite().run()
        with self._stream() as stream:
            for result in report.results:
                line = f"PASS {result.name}" if result.passed else f"FAIL {result.name}: {result.detail}"
                stream.write(line + '\n')
        if not report.passed:
            raise SuiteFailure([report.name])
        return report

    def verify(self, instances=None, workers=None, names=None):
        workers = CLI_DEFAULTS['workers'] if workers is None else workers
        suites = build_suites(instances, self.seed, names)
        reports = run_suites(suites, workers)
        with self._stream() as stream:
            for report in reports:
                stream.write(report.summary() + '\n')
                for failure in report.failures:
                    stream.write(f"    {failure.name}: {failure.detail}\n")
        failed = [r.name for r in reports if not r.passed]
        if failed:
            raise SuiteFailure(failed)
        return reports


class VisiconeArgumentParser(argparse.ArgumentParser):
    """Argument parser that reports bad invocations as InputError"""

    def error(self, message):
        raise InputError(f"{self.prog}: {message}")


def _common_options(suppress: bool) -> argparse.ArgumentParser:
    # subcommand copies keep whatever was given before the command name
    def default(value):
        return argparse.SUPPRESS if suppress else value

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--output', default=default(None), help='Write the result here instead of stdout')
    common.add_argument('--tol', type=float, default=default(TOLERANCES['membership']),
                        help='Membership tolerance')
    common.add_argument('--vis-tol', type=float, default=default(TOLERANCES['visibility']),
                        help='Largest lambda* still reported as visible')
    common.add_argument('--seed', type=int, default=default(CLI_DEFAULTS['seed']), help='Random seed')
    common.add_argument('--verbose', '-v', action='store_true', default=default(False), help='Verbose logging')
    return common


def build_parser():
    common = _common_options(suppress=True)
    parser = VisiconeArgumentParser(prog='visicone', parents=[_common_options(suppress=False)],
                                    description='Visibility and projection for convex bodies')
    commands = parser.add_subparsers(dest='command', required=True)

    for name in QUERY_COMMANDS:
        sub = commands.add_parser(name, parents=[common], help=f"Answer a {name} problem file")
        sub.add_argument('--input', required=True, help='JSON problem file')

    commands.add_parser('check-example24', parents=[common], help='Reproduce the disk cone example')

    verify = commands.add_parser('verify', parents=[common], help='Run the property suites')
    verify.add_argument('--instances', type=int, default=CLI_DEFAULTS['instances'],
                        help='Random instances per suite')
    verify.add_argument('--workers', type=int, default=CLI_DEFAULTS['workers'],
                        help='Suites run concurrently')
    verify.add_argument('--suite', action='append', help='Run only this suite (repeatable)')
    return parser


def run(argv=None) -> int:
    """Run one command and return its exit code"""
    logging.config.dictConfig(LOGGING_CONFIG)
    command = 'visicone'
    try:
        args = build_parser().parse_args(argv)
        command = args.command
        if args.verbose:
            logging.getLogger().setLevel(logging.DEBUG)
        runner = VisiconeRunner(args.tol, args.vis_tol, args.seed, args.output)
        if args.tol <= 0 or args.vis_tol <= 0:
            raise InputError("tolerances must be positive")
        if args.command == 'check-example24':
            runner.check_example24()
        elif args.command == 'verify':
            if args.instances < 0 or args.workers < 1:
                raise InputError("--instances must be nonnegative and --workers positive")
            runner.verify(args.instances, args.workers, args.suite)
        else:
            runner.solve(args.command, args.input)
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        return 130
    except SuiteFailure as e:
        logger.error(f"Verification failed: {e}")
        return 3
    except NumericalError as e:
        logger.error(f"{command} failed: {e}")
        return 2
    except (InputError, GeometryError) as e:
        logger.error(f"{command} failed: {e}")
        return 1
    return 0


def main(argv=None):
    """Main CLI function"""
    sys.exit(run(argv))


if __name__ == '__main__':
    main()
