from flask import Flask, request, jsonify
from flask_cors import CORS
import logging
from libs import config
from libs.errors import MdsError
from services.handle_verify import handle_list_tables, handle_verify, handle_verify_tables
from services.handle_construct import handle_bound, handle_construct
from services.handle_search import handle_search, parse_mode
from services.handle_rareness import handle_rareness, handle_rareness_d4
from services.handle_simulate import handle_simulate
from data_classes.common_classes import (
    BoundRequest,
    ConstructRequest,
    RarenessRequest,
    SearchRequest,
    SimulateRequest,
    VerifyRequest,
)

app = Flask(__name__)
CORS(app)

# Configure logging
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)


def _json_body() -> dict:
    body = request.get_json(silent=True)
    if not isinstance(body, dict):
        raise MdsError("request body must be a JSON object", 400)
    return body


def _int_arg(name: str):
    value = request.args.get(name)
    if value is None:
        return None
    try:
        return int(value)
    except ValueError:
        raise MdsError(f"{name} must be an integer", 400)


def _build(cls, body: dict):
    try:
        return cls(**body)
    except TypeError as e:
        raise MdsError(f"invalid request: {str(e)}", 400)


@app.route('/api/v1/health', methods=['GET'])
def health_check():
    """Health check endpoint"""
    return jsonify({"status": "healthy"}), 200


@app.route('/api/v1/codes/verify', methods=['POST'])
def verify_endpoint():
    """Column distance profile and MDS verdict of a code file"""
    try:
        body = _json_body()
        result = handle_verify(VerifyRequest(code=body.get('code')))
        return jsonify(result), 200
    except MdsError as e:
        return jsonify({"error": e.message}), e.status_code
    except Exception as e:
        logger.error(f"Error verifying code: {str(e)}")
        return jsonify({"error": str(e)}), 500


@app.route('/api/v1/tables', methods=['GET'])
def tables_endpoint():
    try:
        return jsonify(handle_list_tables()), 200
    except MdsError as e:
        return jsonify({"error": e.message}), e.status_code
    except Exception as e:
        logger.error(f"Error listing tables: {str(e)}")
        return jsonify({"error": str(e)}), 500


@app.route('/api/v1/tables/verify', methods=['POST'])
def verify_tables_endpoint():
    try:
        body = request.get_json(silent=True) or {}
        result = handle_verify_tables(slow=bool(body.get('slow', False)))
        return jsonify(result), 200
    except MdsError as e:
        return jsonify({"error": e.message}), e.status_code
    except Exception as e:
        logger.error(f"Error verifying tables: {str(e)}")
        return jsonify({"error": str(e)}), 500


@app.route('/api/v1/constructions', methods=['POST'])
def construct_endpoint():
    """Closed-form d3 / d4 constructions"""
    try:
        body = _json_body()
        result = handle_construct(_build(ConstructRequest, body))
        return jsonify(result), 201
    except MdsError as e:
        return jsonify({"error": e.message}), e.status_code
    except Exception as e:
        logger.error(f"Error constructing code: {str(e)}")
        return jsonify({"error": str(e)}), 500


@app.route('/api/v1/bounds', methods=['GET'])
def bound_endpoint():
    try:
        bound_request = BoundRequest(m=_int_arg('m'), n=_int_arg('n'), distance=_int_arg('distance'))
        return jsonify(handle_bound(bound_request)), 200
    except MdsError as e:
        return jsonify({"error": e.message}), e.status_code
    except Exception as e:
        logger.error(f"Error computing bound: {str(e)}")
        return jsonify({"error": str(e)}), 500


@app.route('/api/v1/searches', methods=['POST'])
def search_endpoint():
    """Backtracking search for a code reaching the target distance"""
    try:
        body = dict(_json_body())
        body.pop('jobs', None)
        body.pop('checkpoint', None)
        body.pop('resume', None)
        if 'mode' in body:
            body['mode'] = parse_mode(body['mode'])
        result = handle_search(_build(SearchRequest, body))
        return jsonify(result), 200
    except MdsError as e:
        return jsonify({"error": e.message}), e.status_code
    except Exception as e:
        logger.error(f"Error running search: {str(e)}")
        return jsonify({"error": str(e)}), 500


@app.route('/api/v1/rareness', methods=['POST'])
def rareness_endpoint():
    try:
        body = dict(_json_body())
        mode = body.pop('mode', 'exact')
        if mode not in ('exact', 'probe'):
            raise MdsError("mode must be exact or probe", 400)
        body.pop('jobs', None)
        body['exact'] = mode == 'exact'
        result = handle_rareness(_build(RarenessRequest, body))
        return jsonify(result), 200
    except MdsError as e:
        return jsonify({"error": e.message}), e.status_code
    except Exception as e:
        logger.error(f"Error computing rareness: {str(e)}")
        return jsonify({"error": str(e)}), 500


@app.route('/api/v1/rareness/d4', methods=['GET'])
def rareness_d4_endpoint():
    try:
        m = _int_arg('m')
        if m is None:
            raise MdsError("m is required", 400)
        return jsonify(handle_rareness_d4(m)), 200
    except MdsError as e:
        return jsonify({"error": e.message}), e.status_code
    except Exception as e:
        logger.error(f"Error computing d4 rareness: {str(e)}")
        return jsonify({"error": str(e)}), 500


@app.route('/api/v1/simulations', methods=['POST'])
def simulate_endpoint():
    """Erasure channel simulation over a code file"""
    try:
        body = _json_body()
        result = handle_simulate(_build(SimulateRequest, body))
        return jsonify(result), 200
    except MdsError as e:
        return jsonify({"error": e.message}), e.status_code
    except Exception as e:
        logger.error(f"Error simulating: {str(e)}")
        return jsonify({"error": str(e)}), 500


if __name__ == '__main__':
    app.run(debug=False, port=config.PORT)
