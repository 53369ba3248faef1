#include <string_view>

#include "gcnet/tz.hpp"

namespace gcnet {

// Snapshot of the IANA rules relevant to the developed-market exchanges,
// reduced to the period from 1996 on. Columns follow the zic source format.
std::string_view pinned_tzdata() {
  static constexpr std::string_view kData = R"TZ(
# Rule  NAME    FROM    TO      -       IN      ON      AT      SAVE    LETTER
Rule    EU      1981    max     -       Mar     lastSun 1:00u   1:00    S
Rule    EU      1996    max     -       Oct     lastSun 1:00u   0       -

Rule    US      1967    2006    -       Oct     lastSun 2:00    0       S
Rule    US      1987    2006    -       Apr     Sun>=1  2:00    1:00    D
Rule    US      2007    max     -       Mar     Sun>=8  2:00    1:00    D
Rule    US      2007    max     -       Nov     Sun>=1  2:00    0       S

Rule    Canada  1974    2006    -       Oct     lastSun 2:00    0       S
Rule    Canada  1987    2006    -       Apr     Sun>=1  2:00    1:00    D
Rule    Canada  2007    max     -       Mar     Sun>=8  2:00    1:00    D
Rule    Canada  2007    max     -       Nov     Sun>=1  2:00    0       S

Rule    AN      1987    1999    -       Oct     lastSun 2:00s   1:00    D
Rule    AN      1996    2005    -       Mar     lastSun 2:00s   0       S
Rule    AN      2000    only    -       Aug     lastSun 2:00s   1:00    D
Rule    AN      2001    2007    -       Oct     lastSun 2:00s   1:00    D
Rule    AN      2006    only    -       Apr     Sun>=1  2:00s   0       S
Rule    AN      2007    only    -       Mar     lastSun 2:00s   0       S
Rule    AN      2008    max     -       Apr     Sun>=1  2:00s   0       S
Rule    AN      2008    max     -       Oct     Sun>=1  2:00s   1:00    D

# Zone  NAME                STDOFF  RULES   FORMAT  [UNTIL]
Zone    Etc/UTC             0       -       UTC
Zone    UTC                 0       -       UTC
Zone    Europe/London       0:00    EU      GMT/BST
Zone    Europe/Dublin       0:00    EU      GMT/IST
Zone    Europe/Lisbon       0:00    EU      WE%sT
Zone    Europe/Amsterdam    1:00    EU      CE%sT
Zone    Europe/Berlin       1:00    EU      CE%sT
Zone    Europe/Brussels     1:00    EU      CE%sT
Zone    Europe/Madrid       1:00    EU      CE%sT
Zone    Europe/Oslo         1:00    EU      CE%sT
Zone    Europe/Paris        1:00    EU      CE%sT
Zone    Europe/Rome         1:00    EU      CE%sT
Zone    Europe/Stockholm    1:00    EU      CE%sT
Zone    Europe/Vienna       1:00    EU      CE%sT
Zone    Europe/Zurich       1:00    EU      CE%sT
Zone    Europe/Athens       2:00    EU      EE%sT
Zone    Europe/Helsinki     2:00    EU      EE%sT
Zone    America/New_York    -5:00   US      E%sT
Zone    America/Toronto     -5:00   Canada  E%sT
Zone    Asia/Hong_Kong      8:00    -       HKT
Zone    Asia/Tokyo          9:00    -       JST
Zone    Australia/Sydney    10:00   AN      AE%sT
)TZ";
  return kData;
}

}  // namespace gcnet
