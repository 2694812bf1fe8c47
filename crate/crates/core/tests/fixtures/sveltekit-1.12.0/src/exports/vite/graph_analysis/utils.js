const query_pattern = /\?.*$/s;

/** @param {string} path */
export function remove_query_from_id(path) {
	return path.replace(query_pattern, '');
}
