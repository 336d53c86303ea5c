#################################################################################
#   Copyright Amazon.com, Inc. or its affiliates. All Rights Reserved.          #
#                                                                               #
#   Licensed under the Apache License, Version 2.0 (the "License").             #
#   You may not use this file except in compliance with the License.            #
#   You may obtain a copy of the License at                                     #
#                                                                               #
#       http://www.apache.org/licenses/LICENSE-2.0                              #
#                                                                               #
#   Unless required by applicable law or agreed to in writing, software         #
#   distributed under the License is distributed on an "AS IS" BASIS,           #
#   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.    #
#   See the License for the specific language governing permissions and         #
#   limitations under the License.                                              #
#################################################################################
"""A class for the abstract JSON-serializable record interface."""
import abc
import json
from typing import Any, Union

ABC = abc.ABCMeta('ABC', (object,), {})


class ConfigInterface(ABC):
    """
    Interface shared by every parameter pack, report and config record.
    """
    @abc.abstractmethod
    def to_json(self) -> dict:
        """
        Convert the record to a flat json formatted dict.

        Returns:
            dict: json formatted dict of the record.
        """
        raise NotImplementedError('The subclass of ConfigInterface must implement this method')

    @abc.abstractmethod
    def copy(self) -> Any:
        """
        Copy the record.

        Returns:
            Any: a copy of the record.
        """
        raise NotImplementedError('The subclass of ConfigInterface must implement this method')

    @staticmethod
    @abc.abstractmethod
    def from_json(json_obj: Union[dict, str]) -> Any:
        """
        Create the record from json in either string or dict format.

        Args:
            json_obj (Union[dict, str]): json in either string or dict format.

        Returns:
            Any: the record.
        """
        raise NotImplementedError('The subclass of ConfigInterface must implement this method')

    def canonical(self) -> str:
        """
        Returns the canonical text form: sorted keys, two-space indent.

        Returns:
            str: canonical json text of the record.
        """
        return json.dumps(self.to_json(), sort_keys=True, indent=2)

    @staticmethod
    def load(json_obj: Union[dict, str]) -> dict:
        """
        Normalize json input in either string or dict format to a dict.

        Args:
            json_obj (Union[dict, str]): json in either string or dict format.

        Returns:
            dict: the parsed json object.
        """
        if isinstance(json_obj, str):
            json_obj = json.loads(json_obj)
        if not isinstance(json_obj, dict):
            raise ValueError("Expected json object but received {}.".format(type(json_obj)))
        return json_obj
